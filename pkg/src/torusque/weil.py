"""Metaplectic-type representation of Sp(2n, F_p) on the quantum space.

Generators and their operators, acting on functions F_p^n -> C:

    dilate(M)  block diag(M, (M^T)^-1)      f(x) |-> legendre(det M) f(M^-1 x)
    shear(S)   [[I, 0], [-S, I]], S = S^T   f(x) |-> psi(nu x^T S x) f(x)
    fourier    [[0, I], [-I, 0]]            f(x) |-> gamma p^{-n/2} sum_y psi(x.y) f(y)

Each operator conjugates the lattice translations exactly as its matrix acts
on lattice vectors (the Egorov identity).  The free normalization gamma of
the Fourier element is solved, not assumed: with K = F D_I (D_I the shear of
the identity block), the matrix (fourier * shear(I))^3 is the identity in
Sp(2n, F_p), so K^3 must be a scalar c by irreducibility, and

    gamma^3 = 1/c,   gamma^2 = legendre((-1)^n, p)   =>   gamma = sigma((-1)^n)/c.

For n = 1 every group element is reached through a short Bruhat-type word in
the generators; the resulting map is certified multiplicative by exhaustive
(small p) or sampled pair checks.  For n >= 2 only the generator monoid and
abelian (Hecke) tori are linearized, the latter through Schur-averaged
intertwiners with the free phase fixed per torus generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ffcore
from .ffcore import Mat, PrimeModulus, legendre, mat, mat_inv_modp, mat_mod, mat_mul
from .heisenberg import PhasedPermutation, index_vectors, pi_op, root_table


class ConstructionError(RuntimeError):
    """No consistent phase assignment / intertwiner found."""


# ---------------------------------------------------------------------------
# generator operators


def dilate_matrix(m_block: Mat, pm: PrimeModulus) -> Mat:
    p, n = pm.p, pm.n
    inv_t = ffcore.mat_transpose(mat_inv_modp(m_block, p))
    rows = []
    for i in range(n):
        rows.append(tuple(m_block[i][j] % p for j in range(n)) + (0,) * n)
    for i in range(n):
        rows.append((0,) * n + tuple(inv_t[i][j] % p for j in range(n)))
    return tuple(rows)


def shear_matrix(s_block: Mat, pm: PrimeModulus) -> Mat:
    p, n = pm.p, pm.n
    rows = []
    for i in range(n):
        rows.append(tuple(1 if i == j else 0 for j in range(n)) + (0,) * n)
    for i in range(n):
        rows.append(tuple((-s_block[i][j]) % p for j in range(n))
                    + tuple(1 if i == j else 0 for j in range(n)))
    return tuple(rows)


def fourier_matrix(pm: PrimeModulus) -> Mat:
    n = pm.n
    rows = []
    for i in range(n):
        rows.append((0,) * n + tuple(1 if i == j else 0 for j in range(n)))
    for i in range(n):
        rows.append(tuple((-1) % pm.p if i == j else 0 for j in range(n)) + (0,) * n)
    return tuple(rows)


def dilate_op(m_block: Mat, pm: PrimeModulus) -> PhasedPermutation:
    """f |-> legendre(det M) f(M^-1 x), a signed permutation of the point basis."""
    p = pm.p
    det = ffcore.mat_det(m_block) % p
    if det == 0:
        raise ValueError("dilation block must be invertible mod p")
    minv = mat_inv_modp(m_block, p)
    pts = index_vectors(pm)
    src = ((pts @ np.array(minv).T) % p) @ (p ** np.arange(pm.n))
    expo = np.zeros(pm.dim, dtype=np.int64)
    return PhasedPermutation(pm, src.astype(np.intp), expo, float(legendre(det, p)))


def shear_op(s_block: Mat, pm: PrimeModulus) -> PhasedPermutation:
    """f |-> psi(nu x^T S x) f(x) for symmetric S."""
    p = pm.p
    s_block = mat_mod(mat(s_block), p)
    if s_block != ffcore.mat_transpose(s_block):
        raise ValueError("shear block must be symmetric")
    pts = index_vectors(pm)
    quad = np.einsum("xi,ij,xj->x", pts, np.array(s_block), pts) % p
    expo = (pm.nu * quad) % p
    return PhasedPermutation(pm, np.arange(pm.dim, dtype=np.intp),
                             expo.astype(np.int64))


def fourier_op(pm: PrimeModulus, gamma: complex = 1.0) -> np.ndarray:
    """gamma * p^{-n/2} [psi(x.y)]_{x,y}, dense."""
    pts = index_vectors(pm)
    dots = (pts @ pts.T) % pm.p
    return gamma * root_table(pm.p)[dots] / pm.p ** (pm.n / 2)


# ---------------------------------------------------------------------------
# words over the generators


@dataclass(frozen=True)
class SpFactor:
    kind: str  # "shear" | "dilate" | "fourier"
    block: Mat | None = None


def word_matrix(word: list[SpFactor], pm: PrimeModulus) -> Mat:
    out = ffcore.identity_mat(2 * pm.n)
    for f in word:
        if f.kind == "shear":
            g = shear_matrix(f.block, pm)
        elif f.kind == "dilate":
            g = dilate_matrix(f.block, pm)
        else:
            g = fourier_matrix(pm)
        out = mat_mul(out, g, mod=pm.p)
    return out


def word_operator(word: list[SpFactor], pm: PrimeModulus, gamma: complex) -> np.ndarray:
    out = np.eye(pm.dim, dtype=complex)
    for f in word:
        if f.kind == "shear":
            out = shear_op(f.block, pm).apply_right(out)
        elif f.kind == "dilate":
            out = dilate_op(f.block, pm).apply_right(out)
        else:
            out = out @ fourier_op(pm, gamma)
    return out


def sl2_word(b: Mat, p: int) -> list[SpFactor]:
    """Length <= 4 word over {shear, dilate, fourier} multiplying to b in SL2(F_p).

    For upper-right entry zero the word avoids the Fourier factor entirely.
    """
    pm1 = PrimeModulus(p, 1)
    a, bb = b[0][0] % p, b[0][1] % p
    c, d = b[1][0] % p, b[1][1] % p
    if (a * d - bb * c) % p != 1:
        raise ValueError("matrix is not in SL2 mod p")
    word: list[SpFactor] = []
    if bb == 0:
        # [[a, 0], [c, a^-1]] = dilate(a) * shear(-a*c)
        if a % p != 1:
            word.append(SpFactor("dilate", ((a,),)))
        s = (-a * c) % p
        if s:
            word.append(SpFactor("shear", ((s,),)))
    else:
        # [[a, b], [c, d]] = shear(-d/b) * dilate(b) * fourier * shear(-a/b)
        binv = pow(bb, -1, p)
        s1 = (-d * binv) % p
        s2 = (-a * binv) % p
        if s1:
            word.append(SpFactor("shear", ((s1,),)))
        if bb != 1:
            word.append(SpFactor("dilate", ((bb,),)))
        word.append(SpFactor("fourier"))
        if s2:
            word.append(SpFactor("shear", ((s2,),)))
    assert word_matrix(word, pm1) == mat_mod(b, p)
    return word


# ---------------------------------------------------------------------------
# the linearized representation


@dataclass
class WeilRep:
    """Cache of unitary operators B -> rho(B) with the solved normalization.

    Entries are tagged by how they were produced; every insert is validated
    against the Egorov identity.  n = 1 supports the whole group through
    sl2_word; n >= 2 supports the generator monoid (tori are handled
    separately by TorusRep).
    """

    pm: PrimeModulus
    gamma: complex
    egorov_tol: float
    cache: dict = field(default_factory=dict)
    tags: dict = field(default_factory=dict)

    def op(self, b: Mat) -> np.ndarray:
        key = mat_mod(mat(b), self.pm.p)
        if key in self.cache:
            return self.cache[key]
        if self.pm.n == 1:
            word = sl2_word(key, self.pm.p)
            dense = word_operator(word, self.pm, self.gamma)
            tag = "bruhat-word"
        else:
            dense, tag = self._monoid_or_intertwiner(key)
        dev = egorov_deviation(dense, key, self.pm)
        if dev > self.egorov_tol:
            raise ConstructionError(f"Egorov deviation {dev:.2e} for {key}")
        self.cache[key] = dense
        self.tags[key] = tag
        return dense

    def insert_generator(self, b: Mat, dense: np.ndarray, tag: str):
        key = mat_mod(mat(b), self.pm.p)
        dev = egorov_deviation(dense, key, self.pm)
        if dev > self.egorov_tol:
            raise ConstructionError(f"Egorov deviation {dev:.2e} for generator {key}")
        self.cache[key] = dense
        self.tags[key] = tag

    def _monoid_or_intertwiner(self, key: Mat):
        n = self.pm.n
        p = self.pm.p
        # recognize pure generator shapes
        a = [[key[i][j] % p for j in range(2 * n)] for i in range(2 * n)]
        top_right = [[a[i][n + j] for j in range(n)] for i in range(n)]
        bot_left = [[a[n + i][j] for j in range(n)] for i in range(n)]
        top_left = [[a[i][j] for j in range(n)] for i in range(n)]
        bot_right = [[a[n + i][n + j] for j in range(n)] for i in range(n)]
        ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        zero = [[0] * n for _ in range(n)]
        if top_right == zero and top_left == ident and bot_right == ident:
            s = mat(tuple(tuple((-x) % p for x in row) for row in bot_left))
            return shear_op(s, self.pm).dense(), "generator-formula"
        if top_right == zero and bot_left == zero:
            return dilate_op(mat(top_left), self.pm).dense(), "generator-formula"
        if key == mat_mod(fourier_matrix(self.pm), p):
            return fourier_op(self.pm, self.gamma), "generator-formula"
        rng = np.random.default_rng(_seed_from_key(key, p))
        m = schur_intertwiner(key, self.pm, rng)
        return m, "schur-intertwiner"


def _seed_from_key(key: Mat, p: int) -> int:
    s = 0
    for row in key:
        for x in row:
            s = (s * p + int(x)) % (2 ** 63 - 1)
    return s + 7


def egorov_deviation(dense: np.ndarray, b: Mat, pm: PrimeModulus,
                     xis=None) -> float:
    """max | rho(B) T(xi) - T(B xi) rho(B) | over a spanning set of xi."""
    p, n = pm.p, pm.n
    if xis is None:
        xis = [tuple(1 if i == j else 0 for i in range(2 * n)) for j in range(2 * n)]
    dev = 0.0
    for xi in xis:
        bxi = ffcore.mat_vec(mat(b), tuple(int(c) for c in xi), mod=p)
        lhs = pi_op(xi, pm).apply_right(dense)          # rho(B) @ T(xi)
        rhs = pi_op(bxi, pm).apply_left(dense)          # T(B xi) @ rho(B)
        dev = max(dev, float(np.abs(lhs - rhs).max()))
    return dev


def solve_gamma(pm: PrimeModulus) -> complex:
    """Fix the Fourier normalization from the cube relation (see module docs)."""
    f0 = fourier_op(pm, 1.0)
    d1 = shear_op(ffcore.identity_mat(pm.n), pm)
    k = d1.apply_right(f0)          # F @ D_I
    k3 = k @ k @ k
    off = k3 - np.eye(pm.dim) * k3[0, 0]
    if np.abs(off).max() > 1e-8 * abs(k3[0, 0]):
        raise ConstructionError("cube of Fourier*shear is not scalar")
    c = k3[0, 0]
    if abs(abs(c) - 1.0) > 1e-8:
        raise ConstructionError(f"cube scalar |c| = {abs(c):.6f} != 1")
    r = legendre((-1) ** pm.n, pm.p)
    if abs(c * c - r) > 1e-8:
        raise ConstructionError(
            "normalization inconsistency: c^2 != legendre((-1)^n); "
            "generator conventions do not linearize")
    gamma = r / c
    return complex(gamma)


def linearize(pm: PrimeModulus, egorov_tol: float | None = None) -> WeilRep:
    """Build the representation with all free phases pinned."""
    if egorov_tol is None:
        egorov_tol = 1e-9 * pm.p ** (pm.n / 2)
    gamma = solve_gamma(pm)
    rep = WeilRep(pm, gamma, egorov_tol)
    # seed the cache with the generators themselves
    rep.insert_generator(fourier_matrix(pm), fourier_op(pm, gamma), "generator-formula")
    rep.insert_generator(shear_matrix(ffcore.identity_mat(pm.n), pm),
                         shear_op(ffcore.identity_mat(pm.n), pm).dense(),
                         "generator-formula")
    return rep


# ---------------------------------------------------------------------------
# group enumeration + multiplicativity certification (n = 1)


def sl2_elements(p: int) -> list[Mat]:
    """All of SL2(F_p), ordered deterministically."""
    out = []
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p == 1:
                        out.append(((a, b), (c, d)))
    return out


@dataclass
class MultiplicativityReport:
    pairs_checked: int
    max_dev: float
    ok: bool


def check_multiplicativity(rep: WeilRep, elements: list[Mat] | None = None,
                           pairs: int | None = None, tol: float = 1e-8,
                           seed: int = 0) -> MultiplicativityReport:
    """rho(B1) rho(B2) = rho(B1 B2): exhaustive when pairs is None.

    The sampled mode draws random pairs and evaluates each operator through
    its word without touching the cache, so memory stays O(p^2n) even at the
    top of the sweep range.
    """
    pm = rep.pm
    if pairs is None:
        if elements is None:
            elements = sl2_elements(pm.p)
        ops = np.stack([rep.op(b) for b in elements])
        index = {b: i for i, b in enumerate(elements)}
        m = len(elements)
        max_dev = 0.0
        for i in range(m):
            for j in range(m):
                prod = mat_mul(elements[i], elements[j], mod=pm.p)
                dev = float(np.abs(ops[i] @ ops[j] - ops[index[prod]]).max())
                max_dev = max(max_dev, dev)
        return MultiplicativityReport(m * m, max_dev, max_dev <= tol)

    rng = np.random.default_rng(seed)
    max_dev = 0.0
    for _ in range(pairs):
        b1 = random_sl2(pm.p, rng)
        b2 = random_sl2(pm.p, rng)
        prod = mat_mul(b1, b2, mod=pm.p)
        op1 = word_operator(sl2_word(b1, pm.p), pm, rep.gamma)
        op2 = word_operator(sl2_word(b2, pm.p), pm, rep.gamma)
        op12 = word_operator(sl2_word(prod, pm.p), pm, rep.gamma)
        max_dev = max(max_dev, float(np.abs(op1 @ op2 - op12).max()))
    return MultiplicativityReport(pairs, max_dev, max_dev <= tol)


def random_sl2(p: int, rng: np.random.Generator) -> Mat:
    a, b, c = (int(x) for x in rng.integers(0, p, size=3))
    if a != 0:
        return ((a, b), (c, (1 + b * c) * pow(a, -1, p) % p))
    # a = 0 needs b*c = -1
    b = b or 1
    return ((0, b), ((-pow(b, -1, p)) % p, int(rng.integers(0, p))))


# ---------------------------------------------------------------------------
# Schur-averaged intertwiners and torus linearization


def schur_intertwiner(b: Mat, pm: PrimeModulus, rng: np.random.Generator,
                      max_tries: int = 8) -> np.ndarray:
    """Unitary W with W T(xi) W^-1 = T(B xi), phase unfixed.

    Averages T(B xi) C T(xi)^-1 over all lattice vectors xi for a random C;
    by irreducibility the average is a scalar multiple of a unitary, or zero
    with probability ~ p^-2n (then retried with a fresh C).
    """
    p, n, d = pm.p, pm.n, pm.dim
    b = mat_mod(mat(b), p)
    if not ffcore.is_symplectic(b, p=p):
        raise ValueError("intertwiner target must be symplectic mod p")
    vecs_idx = np.arange(p ** (2 * n))
    digits = np.stack([(vecs_idx // p ** j) % p for j in range(2 * n)], axis=1)
    for _ in range(max_tries):
        c = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        acc = np.zeros((d, d), dtype=complex)
        for row in digits:
            xi = tuple(int(x) for x in row)
            bxi = ffcore.mat_vec(b, xi, mod=p)
            t_in = pi_op(xi, pm)
            t_out = pi_op(bxi, pm)
            acc += t_out.apply_left(t_in.adjoint().apply_right(c))
        norm = np.linalg.norm(acc)
        if norm < 1e-9 * d:
            continue
        gram = acc.conj().T @ acc
        scale = gram.trace().real / d
        if np.abs(gram - scale * np.eye(d)).max() > 1e-6 * scale:
            raise ConstructionError("averaged operator is not a scalar times unitary")
        return acc / np.sqrt(scale)
    raise ConstructionError("intertwiner averaging returned zero repeatedly")


@dataclass
class TorusRep:
    """Honest homomorphism B -> rho(B) on one abelian subgroup.

    ops maps the matrix (as a key) to its unitary; root_index records which
    N-th root was used to fix each generator phase (the residual freedom).
    """

    pm: PrimeModulus
    ops: dict
    root_index: tuple

    def op(self, b: Mat) -> np.ndarray:
        return self.ops[mat_mod(mat(b), self.pm.p)]


def linearize_on_torus(torus, pm: PrimeModulus,
                       rng: np.random.Generator | None = None,
                       root_index: tuple | int = 0,
                       tol: float = 1e-8) -> TorusRep:
    """Fix intertwiner phases so the map is multiplicative on the torus.

    For each generator g of order N, W_g^N must be a scalar lambda by Schur;
    rescaling W_g by any N-th root of lambda^-1 gives rho(g)^N = 1.  The
    root_index selects which root (all choices differ by a character twist).
    """
    if rng is None:
        rng = np.random.default_rng(20240901)
    if isinstance(root_index, int):
        root_index = (root_index,) * len(torus.generators)
    gens_fixed = []
    for (g, order), ridx in zip(torus.generators, root_index):
        w = schur_intertwiner(g, pm, rng)
        wn = np.linalg.matrix_power(w, order)
        lam = wn[0, 0]
        if np.abs(wn - lam * np.eye(pm.dim)).max() > tol or abs(abs(lam) - 1) > tol:
            raise ConstructionError("generator power is not scalar; intertwiner bug")
        # rho(g) = w / lambda^(1/N), choosing the ridx-th N-th root
        root = lam ** (1.0 / order) * np.exp(2j * np.pi * ridx / order)
        gens_fixed.append((g, order, w / root))
    # two-generator compatibility: commutators must vanish exactly
    for i in range(len(gens_fixed)):
        for j in range(i + 1, len(gens_fixed)):
            wi, wj = gens_fixed[i][2], gens_fixed[j][2]
            if np.abs(wi @ wj - wj @ wi).max() > tol:
                raise ConstructionError("inconsistent two-generator phases")
    ops = {}
    for b_key, exps in torus.dlog.items():
        dense = np.eye(pm.dim, dtype=complex)
        for (g, order, w), e in zip(gens_fixed, exps):
            if e:
                dense = dense @ np.linalg.matrix_power(w, e)
        ops[b_key] = dense
    if len(ops) != torus.order:
        raise ConstructionError("torus regeneration mismatch")
    return TorusRep(pm, ops, tuple(root_index))

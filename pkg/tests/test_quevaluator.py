import numpy as np
import pytest

from torusque import ffcore, hecke, quevaluator as q
from torusque.ffcore import PrimeModulus, identity_mat, legendre, mat_mod
from torusque.heisenberg import FourierPolynomial


def test_trace_of_identity_pair(rep_cache):
    pm = PrimeModulus(7, 1)
    rep = rep_cache(7)
    ident = rep.op(identity_mat(2))
    assert abs(q.trace_pair((0, 0), ident, pm) - 7) < 1e-12
    for xi in ((1, 0), (0, 3), (2, 5)):
        assert abs(q.trace_pair(xi, ident, pm)) < 1e-12


def test_trace_periodicity_exact(rep_cache, torus_cache):
    pm = PrimeModulus(7, 1)
    rep = rep_cache(7)
    b = torus_cache(7).elements[3]
    dense = rep.op(b)
    assert q.trace_pair((2, 3), dense, pm) == q.trace_pair((2 + 7, 3 - 21), dense, pm)


def test_trace_table_matches_direct(cat_map, rep_cache, torus_cache):
    pm = PrimeModulus(7, 1)
    rep = rep_cache(7)
    torus = torus_cache(7)
    table = q.build_trace_table(torus, rep)
    rng = np.random.default_rng(7)
    for _ in range(30):
        xi = tuple(int(x) for x in rng.integers(0, 7, 2))
        b = torus.elements[int(rng.integers(torus.order))]
        assert abs(table.value(xi, b) - q.trace_pair(xi, rep.op(b), pm)) < 1e-12


def test_invariance_under_conjugation(cat_map, rep_cache, torus_cache):
    # F(xi, B) = F(S xi, S B S^-1) over random triples
    pm = PrimeModulus(7, 1)
    rep = rep_cache(7)
    torus = torus_cache(7)
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(100):
        xi = tuple(int(x) for x in rng.integers(0, 7, 2))
        b = torus.elements[int(rng.integers(torus.order))]
        while True:
            a, bb, c = (int(x) for x in rng.integers(0, 7, 3))
            if a:
                s = ((a, bb), (c, (1 + bb * c) * pow(a, -1, 7) % 7))
                break
        worst = max(worst, q.check_invariance(xi, b, s, rep, pm))
    assert worst < 1e-8


def test_invariance_identity_conjugator(cat_map, rep_cache, torus_cache):
    pm = PrimeModulus(7, 1)
    b = torus_cache(7).elements[2]
    assert q.check_invariance((1, 2), b, identity_mat(2), rep_cache(7), pm) < 1e-14


def test_invariance_under_fourier_element(rep_cache):
    # S = the Fourier element, random xi, every B in SL2(F_5)
    from torusque.weil import fourier_matrix, sl2_elements
    pm = PrimeModulus(5, 1)
    rep = rep_cache(5)
    s = fourier_matrix(pm)
    rng = np.random.default_rng(12)
    for b in sl2_elements(5)[::7]:
        xi = tuple(int(x) for x in rng.integers(0, 5, 2))
        assert q.check_invariance(xi, b, s, rep, pm) < 1e-9


def test_hermitian_symmetry(cat_map, rep_cache, torus_cache):
    pm = PrimeModulus(7, 1)
    rep = rep_cache(7)
    torus = torus_cache(7)
    rng = np.random.default_rng(9)
    for _ in range(40):
        xi = tuple(int(x) for x in rng.integers(0, 7, 2))
        b = torus.elements[int(rng.integers(torus.order))]
        assert q.hermitian_symmetry_dev(xi, b, rep, pm) < 1e-10


def test_character_sum_xi_zero_oracle(cat_map, rep_cache, torus_cache):
    # a_chi(0) = |T| * dim of the inverse character's eigenspace
    torus = torus_cache(7)
    rep = rep_cache(7)
    table = q.build_trace_table(torus, rep)
    dec = hecke.decompose(torus, rep)
    chis = hecke.characters(torus)
    for chi, dim in zip(chis, dec.dims):
        val = q.character_sum((0, 0), chi.inverse(), table)
        assert abs(val - torus.order * dim) < 1e-9


def test_parseval_identity(cat_map, rep_cache, torus_cache):
    torus = torus_cache(11)
    table = q.build_trace_table(torus, rep_cache(11))
    achi = q.character_sum_table(table)
    lhs = (np.abs(achi) ** 2).sum(axis=1)
    rhs = torus.order * (np.abs(table.values) ** 2).sum(axis=1)
    assert np.abs(lhs - rhs).max() < 1e-8 * max(1.0, rhs.max())


def test_split_trace_formula_examples(rep_cache):
    pm = PrimeModulus(11, 1)
    sign = q.measure_split_sign(pm, rep_cache(11))
    # lam * mu = 0 reduces to the quadratic symbol
    for a in (2, 3, 7):
        assert abs(q.split_trace_formula(0, 4, a, pm, sign) - legendre(a, 11)) < 1e-12
    # a = -1 makes the phase vanish: value sigma(-1)
    assert abs(q.split_trace_formula(3, 5, 10, pm, sign) - legendre(-1, 11)) < 1e-12


def test_split_trace_formula_p5_example(rep_cache):
    # p=5, lam=mu=1, a=2: (1+a)/(1-a) = -3 = 2, half of lam*mu*2 is 1, so the
    # value is sigma(2) psi(sign * 1) = -exp(sign * 2 pi i / 5)
    pm = PrimeModulus(5, 1)
    rep = rep_cache(5)
    sign = q.measure_split_sign(pm, rep)
    val = q.split_trace_formula(1, 1, 2, pm, sign)
    assert abs(val - (-np.exp(sign * 2j * np.pi / 5))) < 1e-12
    # and it equals the independent matrix trace
    b = ((2, 0), (0, 3))
    assert abs(val - q.trace_pair((1, 1), rep.op(b), pm)) < 1e-12


def test_split_trace_formula_rejects_bad_a():
    pm = PrimeModulus(7, 1)
    with pytest.raises(ValueError):
        q.split_trace_formula(1, 1, 0, pm)
    with pytest.raises(ValueError):
        q.split_trace_formula(1, 1, 1, pm)


def test_split_trace_formula_exhaustive_p11(rep_cache):
    pm = PrimeModulus(11, 1)
    rep = rep_cache(11)
    sign = q.measure_split_sign(pm, rep)
    worst = 0.0
    for a in range(2, 11):
        dense = rep.op(((a, 0), (0, pow(a, -1, 11))))
        for lam in range(11):
            for mu in range(11):
                worst = max(worst, abs(q.split_trace_formula(lam, mu, a, pm, sign)
                                       - q.trace_pair((lam, mu), dense, pm)))
    assert worst < 1e-10


def test_gauss_sum_oracle_examples():
    pm = PrimeModulus(11, 1)
    # c = 0, trivial character: sum of the quadratic symbol over a != 0, 1
    assert abs(q.gauss_sum_oracle(0, 0, pm) - (-1)) < 1e-12
    for c in range(1, 11):
        for k in range(10):
            assert abs(q.gauss_sum_oracle(c, k, pm)) <= 2 * np.sqrt(11) + 1e-9


def test_gauss_sum_oracle_matches_character_sums(cat_map, rep_cache, torus_cache):
    # cross-validation at the split prime 11, all characters, xi != 0
    pm = PrimeModulus(11, 1)
    rep = rep_cache(11)
    torus = torus_cache(11)
    table = q.build_trace_table(torus, rep)
    transport = q.build_split_transport(cat_map.matrix, pm, cat_map.charpoly)
    sign = q.measure_split_sign(pm, rep)
    _, dl = ffcore.dlog_table(11)
    chis = hecke.characters(torus)
    worst = 0.0
    for chi in chis:
        (k,) = transport.transport_char(chi, torus)
        for flat in range(1, 121):
            xi = q.unflatten_xi(flat, pm)
            (lam, mu), = transport.factor_coordinates(xi)
            if (lam, mu) == (0, 0):
                continue  # boundary: the a = 1 term p^n would be missing
            c = (sign * lam * mu * pm.nu) % 11
            worst = max(worst, abs(q.character_sum(xi, chi, table)
                                   - q.gauss_sum_oracle(c, k, pm, dl)))
    assert worst < 1e-10


def test_split_transport_structure(cat_map):
    pm = PrimeModulus(11, 1)
    tr = q.build_split_transport(cat_map.matrix, pm, cat_map.charpoly)
    assert ffcore.is_symplectic(tr.s0, p=11)
    assert tr.std_elem(tr.alphas) == mat_mod(cat_map.matrix, 11)
    with pytest.raises(ValueError):
        q.build_split_transport(cat_map.matrix, PrimeModulus(7, 1), cat_map.charpoly)


def test_verify_que_bound_nonsplit(cat_map, rep_cache, torus_cache):
    pm = PrimeModulus(7, 1)
    rpt = q.verify_que_bound(cat_map, pm, rep_cache(7), torus=torus_cache(7))
    assert rpt.ok and rpt.ok_dim1
    assert rpt.max_ratio <= 2.0
    assert rpt.parseval_max_dev < 1e-10
    assert rpt.xi0_oracle_max_dev < 1e-9
    # nonsplit: the order-2 character has an empty eigenspace, so its sums vanish
    assert rpt.exceptional_order2["dim"] == 0
    assert rpt.exceptional_order2["max_abs_sum"] < 1e-9


def test_verify_que_bound_split_defect(cat_map, rep_cache, torus_cache):
    # at split primes the order-2 character hits exactly p - 2 on the 2(p-1)
    # axis vectors; every one-dimensional character respects the bound
    pm = PrimeModulus(11, 1)
    rpt = q.verify_que_bound(cat_map, pm, rep_cache(11), torus=torus_cache(11))
    assert not rpt.ok
    assert rpt.ok_dim1
    assert len(rpt.violations) == 2 * (11 - 1)
    assert all(abs(v[2] - 9.0) < 1e-9 for v in rpt.violations)
    assert all(v[1] == rpt.exceptional_order2["exps"] for v in rpt.violations)
    assert not rpt.generic_violations
    assert rpt.exceptional_order2["dim"] == 2


def test_averaged_fixture_bound(cat_map, rep_cache, torus_cache):
    pm = PrimeModulus(7, 1)
    f = FourierPolynomial({(1, 0): 0.5, (-1, 0): 0.5})
    rpt = q.verify_que_bound(cat_map, pm, rep_cache(7), torus=torus_cache(7),
                             fixtures=[f])
    assert rpt.averaged_rows and all(r["ok_rigorous"] for r in rpt.averaged_rows)


def test_refined_bound_split(cat_map, rep_cache, torus_cache):
    pm = PrimeModulus(11, 1)
    torus = torus_cache(11)
    table = q.build_trace_table(torus, rep_cache(11))
    rpt = q.refined_bound(cat_map, pm, torus, table)
    assert rpt.applicable and rpt.generic_ok
    m1 = [r for r in rpt.rows if r["m"] == 1]
    assert len(m1) == 1
    # the refined character is the order-2 one: transported exponent (p-1)/2
    assert m1[0]["transported"] == (5,)
    assert m1[0]["generic_max"] <= 2.0 + 1e-9
    assert abs(m1[0]["nongeneric_max"] - 9.0) < 1e-9
    m0 = [r for r in rpt.rows if r["m"] == 0]
    assert all(r["refined_bound"] == pytest.approx(2 * np.sqrt(11)) for r in m0)


def test_refined_bound_nonsplit_inapplicable(cat_map, rep_cache, torus_cache):
    pm = PrimeModulus(7, 1)
    torus = torus_cache(7)
    table = q.build_trace_table(torus, rep_cache(7))
    rpt = q.refined_bound(cat_map, pm, torus, table)
    assert not rpt.applicable


def test_cyclic_vs_hecke_demo_coincide_at_p7(cat_map, rep_cache):
    # order of the cat map mod 7 is 8 = |C_A|: the two averages coincide and
    # no degenerate superposition rows exist
    pm = PrimeModulus(7, 1)
    rows, meta = q.cyclic_vs_hecke_demo(cat_map, pm, rep_cache(7))
    assert meta["cyclic_equals_torus"]
    assert meta["max_column_gap"] == 0.0
    for r in rows:
        assert abs(r.cyclic_avg - r.hecke_avg) < 1e-9
        assert r.hecke_ok


def test_cyclic_vs_hecke_demo_differ(cat_map, rep_cache):
    # p = 11: the cat map has order 5 inside a torus of order 10, and on
    # degenerate eigenspaces of the quantized map the columns separate
    pm = PrimeModulus(11, 1)
    rows, meta = q.cyclic_vs_hecke_demo(cat_map, pm, rep_cache(11))
    assert meta["cyclic_order"] == 5 and meta["torus_order"] == 10
    assert meta["max_column_gap"] > 0.05
    pure = [r for r in rows if r.label.startswith("chi=")]
    assert pure and all(abs(r.cyclic_avg - r.hecke_avg) < 1e-9 for r in pure)
    assert all(r.hecke_ok for r in rows)


def test_diagonal_factor_sum_boundary():
    pm = PrimeModulus(11, 1)
    # xi = 0: dominated by the a = 1 boundary term p
    val = q.diagonal_factor_sum(0, 0, 0, pm, sign=-1)
    oracle = q.gauss_sum_oracle(0, 0, pm)
    assert abs(val - (11 + oracle)) < 1e-12

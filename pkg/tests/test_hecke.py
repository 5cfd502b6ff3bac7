import numpy as np
import pytest

from torusque import ffcore, weil
from torusque.ffcore import PrimeModulus, identity_mat, mat_mod, mat_mul
from torusque.hecke import (DegeneratePrimeError, centralizer, character_table,
                            characters, decompose, hecke_average, projector)
from torusque.heisenberg import pi_op


def test_centralizer_orders_cat_map(cat_map):
    # disc 5: nonsplit at 7 (order p + 1), split at 11 (order p - 1)
    t7 = centralizer(cat_map.matrix, PrimeModulus(7, 1), cat_map.charpoly)
    assert t7.order == 8 and t7.split_type == "nonsplit"
    t11 = centralizer(cat_map.matrix, PrimeModulus(11, 1), cat_map.charpoly)
    assert t11.order == 10 and t11.split_type == "split"


def test_degenerate_prime_rejected(cat_map):
    with pytest.raises(DegeneratePrimeError):
        centralizer(cat_map.matrix, PrimeModulus(5, 1), cat_map.charpoly)


def test_centralizer_contains_powers_of_a(cat_map):
    t = centralizer(cat_map.matrix, PrimeModulus(7, 1), cat_map.charpoly)
    a = mat_mod(cat_map.matrix, 7)
    assert t.contains(a)
    assert t.contains(mat_mul(a, a, mod=7))


def test_centralizer_elements_commute_and_symplectic(cat_map):
    for p in (7, 11):
        t = centralizer(cat_map.matrix, PrimeModulus(p, 1), cat_map.charpoly)
        a = mat_mod(cat_map.matrix, p)
        for b in t.elements:
            assert mat_mul(b, a, mod=p) == mat_mul(a, b, mod=p)
            assert ffcore.is_symplectic(b, p=p)


def test_centralizer_against_full_group_scan_n1(cat_map):
    # brute force over all of SL2(F3)
    p = 3
    a = mat_mod(cat_map.matrix, p)
    brute = set()
    for m in weil.sl2_elements(p):
        if mat_mul(m, a, mod=p) == mat_mul(a, m, mod=p):
            brute.add(m)
    t = centralizer(cat_map.matrix, PrimeModulus(p, 1), cat_map.charpoly)
    assert set(t.elements) == brute


def test_centralizer_against_full_group_scan_n2(sp4_elem):
    # brute force over all of Sp(4, F3), generated by shears and the Fourier
    # element (closure size must be the full group order 51840)
    p = 3
    pm = PrimeModulus(p, 2)
    gens = [weil.shear_matrix(((1, 0), (0, 0)), pm),
            weil.shear_matrix(((0, 0), (0, 1)), pm),
            weil.shear_matrix(((0, 1), (1, 0)), pm),
            weil.fourier_matrix(pm)]
    seen = {identity_mat(4)}
    frontier = [identity_mat(4)]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = mat_mul(m, g, mod=p)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    assert len(seen) == 51840
    a = mat_mod(sp4_elem.matrix, p)
    brute = {m for m in seen if mat_mul(m, a, mod=p) == mat_mul(a, m, mod=p)}
    t = centralizer(sp4_elem.matrix, pm, sp4_elem.charpoly)
    assert set(t.elements) == brute
    assert t.order == p ** 2 + 1  # anisotropic quartic torus


def test_torus_structure_certificates(cat_map, sp4_elem):
    t = centralizer(cat_map.matrix, PrimeModulus(7, 1), cat_map.charpoly)
    assert t.gen_orders == (8,)
    assert len(t.dlog) == 8
    # regeneration: products of generators hit every element exactly once
    g, order = t.generators[0]
    acc = identity_mat(2)
    seen = set()
    for _ in range(order):
        seen.add(acc)
        acc = mat_mul(acc, g, mod=7)
    assert seen == set(t.elements)


def test_two_generator_torus(sp4_elem):
    # fully split at 13: torus (F_13^x)^2 of order 144 = 12 x 12
    t = centralizer(sp4_elem.matrix, PrimeModulus(13, 2), sp4_elem.charpoly)
    assert t.order == 144 and t.split_type == "split"
    assert sorted(t.gen_orders) == [12, 12]
    assert len(t.dlog) == 144


def test_two_quadratic_factor_torus(sp4_elem):
    # two self-reciprocal quadratic factors at 19: product of two norm-one
    # circles, order (p + 1)^2
    t = centralizer(sp4_elem.matrix, PrimeModulus(19, 2), sp4_elem.charpoly)
    assert t.factor_degrees == [2, 2]
    assert t.order == 400 and t.split_type == "nonsplit"
    assert sorted(t.gen_orders) == [20, 20]
    assert len(t.dlog) == 400


def test_characters_orthogonality(cat_map, torus_cache):
    t = torus_cache(7)
    tab = character_table(t)
    gram = tab @ tab.conj().T / t.order
    assert np.abs(gram - np.eye(t.order)).max() < 1e-12


def test_trivial_character(torus_cache):
    t = torus_cache(7)
    chis = characters(t)
    triv = chis[0]
    assert triv.is_trivial
    assert np.abs(triv.values_vector(t) - 1).max() == 0


def test_character_multiplicativity_exact(torus_cache):
    t = torus_cache(11)
    chi = characters(t)[3]
    for b1 in t.elements[:5]:
        for b2 in t.elements[:5]:
            prod = mat_mul(b1, b2, mod=11)
            v = chi.value(t, b1) * chi.value(t, b2)
            assert abs(chi.value(t, prod) - v) < 1e-12


def test_decompose_cat_map_p7(cat_map, rep_cache, torus_cache):
    t = torus_cache(7)
    dec = decompose(t, rep_cache(7))
    assert sum(dec.dims) == 7
    assert sorted(dec.dims) == [0, 1, 1, 1, 1, 1, 1, 1]
    # the empty slot sits at the order-2 character; the trivial one has a line
    chis = characters(t)
    for chi, d in zip(chis, dec.dims):
        if chi.is_trivial:
            assert d == 1
        if d == 0:
            assert chi.order == 2


def test_decompose_split_prime_exceptional(cat_map, rep_cache, torus_cache):
    t = torus_cache(11)
    dec = decompose(t, rep_cache(11))
    assert sum(dec.dims) == 11
    chis = characters(t)
    two_dim = [chi for chi, d in zip(chis, dec.dims) if d == 2]
    assert len(two_dim) == 1 and two_dim[0].order == 2
    assert all(d <= 1 for chi, d in zip(chis, dec.dims) if chi.order != 2)


def test_projector_properties(cat_map, rep_cache, torus_cache):
    t = torus_cache(7)
    rep = rep_cache(7)
    chis = characters(t)
    total = np.zeros((7, 7), dtype=complex)
    for chi in chis:
        p_chi = projector(chi, t, rep)
        assert np.abs(p_chi @ p_chi - p_chi).max() < 1e-9
        assert np.abs(p_chi - p_chi.conj().T).max() < 1e-9
        assert abs(p_chi.trace().imag) < 1e-9
        assert abs(p_chi.trace().real - round(p_chi.trace().real)) < 1e-6
        total += p_chi
    assert np.abs(total - np.eye(7)).max() < 1e-9


def test_projectors_mutually_orthogonal(cat_map, rep_cache, torus_cache):
    t = torus_cache(7)
    rep = rep_cache(7)
    chis = characters(t)
    p0 = projector(chis[1], t, rep)
    p1 = projector(chis[2], t, rep)
    assert np.abs(p0 @ p1).max() < 1e-9


def test_hecke_average_xi_zero_is_identity(cat_map, rep_cache, torus_cache):
    t = torus_cache(7)
    avg = hecke_average((0, 0), t, rep_cache(7))
    assert np.abs(avg - np.eye(7)).max() < 1e-12


def test_hecke_average_block_diagonal(cat_map, rep_cache, torus_cache):
    t = torus_cache(7)
    rep = rep_cache(7)
    dec = decompose(t, rep)
    avg = hecke_average((1, 0), t, rep)
    # off-diagonal blocks between distinct characters vanish
    for i, (chi_i, basis_i, dim_i) in enumerate(dec.entries):
        for j, (chi_j, basis_j, dim_j) in enumerate(dec.entries):
            if i == j or dim_i == 0 or dim_j == 0:
                continue
            block = basis_i.conj().T @ avg @ basis_j
            assert np.abs(block).max() < 1e-8


def test_hecke_average_diagonal_is_matrix_element(cat_map, rep_cache, torus_cache):
    t = torus_cache(7)
    rep = rep_cache(7)
    dec = decompose(t, rep)
    xi = (1, 0)
    avg = hecke_average(xi, t, rep)
    t_xi = pi_op(xi, PrimeModulus(7, 1)).dense()
    for chi, basis, dim in dec.entries:
        if dim != 1:
            continue
        v = basis[:, 0]
        assert abs(np.vdot(v, avg @ v) - np.vdot(v, t_xi @ v)) < 1e-9


def test_decompose_n2_cyclic_torus(sp4_elem):
    pm = PrimeModulus(3, 2)
    t = centralizer(sp4_elem.matrix, pm, sp4_elem.charpoly)
    assert t.order == 10
    trep = weil.linearize_on_torus(t, pm, rng=np.random.default_rng(2))
    dec = decompose(t, trep)
    assert sum(dec.dims) == 9
    assert all(d <= 1 for d in dec.dims)

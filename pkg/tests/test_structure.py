from fractions import Fraction as F

import pytest

from wakimoto.currents import act_beta, act_x
from wakimoto.exact import Poly
from wakimoto.fock import FockVector, ModuleParams, Sector, fock_dimension, vacuum
from wakimoto.structure import (
    annihilator_kernel,
    cosingular_report,
    detc,
    f_table,
    g,
    genfun_identity_check,
    lemma_roots,
    matrix_c,
    pbw_basis,
    predicted_vectors,
    scan_structure,
    submodule_closure,
    verify_structure,
)


def test_g_counts_pbw_words():
    assert [g(N) for N in range(7)] == [1, 2, 4, 8, 14, 24, 40]
    for N in range(7):
        assert len(pbw_basis(N)) == g(N) == fock_dimension(N)


def test_c1_matches_hand_expansion():
    k, j = F(7, 5), F(2, 3)
    C = matrix_c(1, Sector(j, ModuleParams.generic(k)))
    assert C == [[F(1, 2), 0], [j / k, j / k + F(1, 2)]]


@pytest.mark.parametrize("k", [F(1), F(1, 3), F(7, 5)], ids=str)
def test_det_c1_closed_form(k):
    res = detc(1, ModuleParams.generic(k))
    assert res.determinant == Poly([F(1, 4), F(1, 2) / k])
    assert res.roots == [(-k / 2, 1)]
    assert res.lemma_match


def test_det_c2_at_level_one():
    res = detc(2, ModuleParams.generic(1))
    assert res.roots == [(F(-1, 2), 2), (F(1, 2), 1)]
    assert res.total_degree == 3 and res.lemma_match


def test_det_roots_do_not_depend_on_samples():
    params = ModuleParams.generic(F(1, 3))
    a = detc(2, params)
    b = detc(2, params, samples=[F(n, 7) - 3 for n in range(a.degree_bound + 3)])
    assert a.monic == b.monic


def test_lemma_roots_small():
    params = ModuleParams.generic(1)
    assert lemma_roots(1, params) == [(F(-1, 2), 1)]
    assert lemma_roots(3, params) == sorted([(F(-1, 2), 4), (F(1, 2), 2), (F(3, 2), 1),
                                             (F(-7, 2), 1)])


def test_generating_function_first_terms():
    f = f_table(3)
    assert f[1][0] == 1 and f[1][1] == 1
    check = genfun_identity_check(3)
    assert check.weighted[1] == check.lemma_sum[1] == 1


def test_generating_function_to_order_20():
    assert genfun_identity_check(20)


def test_kernel_degenerate_sector(k1):
    s = Sector(F(1, 2), k1)
    (nu,) = annihilator_kernel(s, 0)
    assert nu.vector == vacuum(s) and nu.eigenvalue == F(1, 2)
    (u1,) = annihilator_kernel(s, 1)
    assert u1.eigenvalue == F(5, 2)
    for n in (1, 2, 3):
        assert act_x(n, u1.vector).is_zero()
    assert act_beta(1, u1.vector).is_zero()
    assert annihilator_kernel(s, 2) == []


def test_kernel_generic_sector(k1):
    s = Sector(0, k1)
    assert all(annihilator_kernel(s, N) == [] for N in (1, 2, 3))


def test_cosingular_at_j_minus_half(k1):
    rep = cosingular_report(Sector(F(-1, 2), k1), 2)
    assert [(e.degree, e.weight) for e in rep.entries] == [(1, F(-5, 2))]
    assert rep.first_det_zero == 1 and rep.consistent


def test_cosingular_generic(k1):
    rep = cosingular_report(Sector(F(1, 5), k1), 3)
    assert rep.entries == [] and rep.first_det_zero is None and rep.consistent


def test_closure_of_vacuum_generic_is_everything(k1):
    s = Sector(F(1, 5), k1)
    sub = submodule_closure(s, [vacuum(s)], 4)
    assert sub.dims() == [fock_dimension(N) for N in range(5)]


def test_closure_of_u1_is_proper(k1):
    s = Sector(F(1, 2), k1)
    (u1,) = annihilator_kernel(s, 1)
    dims = submodule_closure(s, [u1.vector], 4).dims()
    assert dims[:2] == [0, 1]
    assert all(d < fock_dimension(N) for N, d in enumerate(dims))


def test_closure_empty(k1):
    assert submodule_closure(Sector(0, k1), [], 3).dims() == [0, 0, 0, 0]


def test_closure_monotone_and_idempotent(k1):
    s = Sector(F(1, 2), k1)
    (u1,) = annihilator_kernel(s, 1)
    small = submodule_closure(s, [u1.vector], 4)
    big = submodule_closure(s, [u1.vector, vacuum(s)], 4)
    assert all(a <= b for a, b in zip(small.dims(), big.dims()))
    for N in range(5):
        for row in small.spaces[N].basis():
            assert big.spaces[N].contains(row)
    again = small.copy().add([FockVector(s, row) for N in range(5)
                              for row in small.spaces[N].basis()])
    assert again.dims() == small.dims()


@pytest.mark.parametrize("m, u1_degree, w0_degree", [(1, 2, 1), (2, 1, 2)])
def test_predicted_degrees(k1, m, u1_degree, w0_degree):
    preds = {p.name: p for p in predicted_vectors(k1, m, 0, 0, 6)}
    assert preds["u1"].degree == (3 - m) * (2 - 0 - 1) == u1_degree
    assert preds["w0"].degree == w0_degree
    assert all(p.degree.denominator == 1 and p.degree >= 0 for p in preds.values())


def test_verify_structure_m2(k1):
    rep = verify_structure(k1, 2, 0, 0, 4)
    assert rep.status == "pass"
    assert rep.singular == [(1, F(5, 2))]
    assert rep.quotient_singular == [(0, F(1, 2))]
    assert rep.arrows["v0->u1"] is True and rep.arrows["w0->v0"] is True


def test_verify_structure_m1(k1):
    rep = verify_structure(k1, 1, 0, 0, 4)
    assert rep.status == "pass"
    assert rep.cosingular[0] == (1, F(-5, 2))


def test_verify_structure_rejects_bad_labels(k1):
    with pytest.raises(ValueError):
        verify_structure(k1, 3, 0, 0, 2)
    with pytest.raises(ValueError):
        verify_structure(k1, 1, 0, -1, 2)


def test_scan_generic_pattern(k1):
    rep = scan_structure(Sector(0, k1), 3)
    assert rep.pattern == "generic/irreducible"
    assert rep.singular == [] and rep.cosingular == []

from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import LEVELS
from wakimoto.exact import ProductFactor, product_series
from wakimoto.fock import (
    FockVector,
    ModuleParams,
    Sector,
    apply_mode,
    bracket_constant,
    coefficient,
    enumerate_basis,
    inspect,
    monomial,
    vacuum,
)

MODES = [(f, n) for f in (0, 1, 2) for n in range(-5, 6)
         if n and (n % 2 == (0 if f == 1 else 1))] + [(1, 0)]


def test_vacuum(nu_half):
    nu = vacuum(nu_half)
    assert nu.terms == {(): 1}
    assert nu.degrees() == {0: 1}
    assert nu_half.h == F(1, 8)


@pytest.mark.parametrize("k", [0, -2])
def test_excluded_levels(k):
    with pytest.raises(ValueError):
        ModuleParams.generic(k)


def test_pp_must_be_coprime():
    with pytest.raises(ValueError):
        ModuleParams.from_pp(4, 2)
    assert ModuleParams.from_pp(5, 2).k == F(1, 2)


@pytest.mark.parametrize("family, kap", [(0, 4), (2, -4)])
def test_odd_oscillators(nu_half, family, kap):
    v = apply_mode((family, -1), vacuum(nu_half))
    assert apply_mode((family, 1), v) == vacuum(nu_half) * kap


def test_zero_mode_is_2j():
    s = Sector(F(3, 5), ModuleParams.generic(F(7, 5)))
    assert apply_mode((1, 0), vacuum(s)) == vacuum(s) * F(6, 5)


@pytest.mark.parametrize("mode", [(0, 2), (2, -4), (1, 3), (3, 1)])
def test_illegal_modes(nu_half, mode):
    with pytest.raises(ValueError, match="illegal mode"):
        apply_mode(mode, vacuum(nu_half))


def test_small_bases(nu_half):
    assert enumerate_basis(nu_half, 0) == [()]
    assert enumerate_basis(nu_half, 1) == [((0, -1),), ((2, -1),)]
    two = enumerate_basis(nu_half, 2)
    assert sorted(two) == sorted([
        ((1, -2),), ((0, -1), (0, -1)), ((0, -1), (2, -1)), ((2, -1), (2, -1))])


def test_basis_counts_match_product():
    pattern = (ProductFactor(2, 0), ProductFactor(2, -1, -2))
    series = product_series(pattern, 12)
    for N in range(13):
        assert len(enumerate_basis(None, N)) == series.coefficients[N]


def test_basis_is_canonical():
    for N in range(7):
        b = enumerate_basis(None, N)
        assert b == sorted(b) and len(set(b)) == len(b)
        assert all(m == tuple(sorted(m)) for m in b)


def test_inspect(nu_half):
    nu = vacuum(nu_half)
    assert inspect(nu).degrees == {0: 1}
    assert inspect(nu).coefficient(()) == 1
    v = apply_mode((0, -1), nu)
    assert set(inspect(v).degrees) == {1}


def test_coefficient_wrong_sector(nu_half):
    other = Sector(F(5, 2), nu_half.params)
    with pytest.raises(ValueError, match="another sector"):
        coefficient(vacuum(nu_half), vacuum(other))


@pytest.mark.parametrize("k", LEVELS, ids=str)
def test_oscillator_commutators(k):
    params = ModuleParams.generic(k)
    s = Sector(F(1, 3), params)
    vecs = [FockVector.basis_vector(s, m) for N in range(6) for m in enumerate_basis(s, N)]
    for a in MODES:
        for b in MODES:
            c = bracket_constant(params, a, b)
            for v in vecs:
                lhs = apply_mode(a, apply_mode(b, v)) - apply_mode(b, apply_mode(a, v))
                assert lhs == v * c


@given(st.sampled_from(MODES[:-1]), st.integers(0, 6), st.data())
def test_modes_shift_degree(mode, N, data):
    s = Sector(F(1, 2), ModuleParams.generic(F(1, 3)))
    basis = enumerate_basis(s, N)
    mono = data.draw(st.sampled_from(basis))
    w = apply_mode(mode, FockVector.basis_vector(s, mono))
    assert set(w.degrees()) <= {N - mode[1]}


def test_monomial_rejects_annihilators():
    with pytest.raises(ValueError):
        monomial((0, 1))
    assert monomial((2, -1), (0, -3)) == ((0, -3), (2, -1))

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wakimoto.exact import (
    CharacterSeries,
    Poly,
    ProductFactor,
    Rat,
    as_rat,
    fstr,
    interpolate_poly,
    product_series,
    rational_roots,
    series_compare,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)

BICOLORED = (ProductFactor(1, 0), ProductFactor(2, -1))
FOCK = (ProductFactor(2, 0), ProductFactor(2, -1, -2))


def test_rat_is_fraction_compatible():
    assert Rat(3, 4) == F(3, 4)
    assert hash(Rat(3, 4)) == hash(F(3, 4))
    assert as_rat(" -6/8 ") == F(-3, 4)
    assert as_rat(F(5, 10)) == Rat(1, 2)


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_rat(0.5)


@pytest.mark.parametrize("x, s", [(0, "0/1"), (F(-3, 6), "-1/2"), (7, "7/1"), ("4/6", "2/3")])
def test_fstr(x, s):
    assert fstr(x) == s


def test_interpolate_identity_line():
    assert interpolate_poly([(0, 0), (1, 1), (2, 2)], 1) == Poly.variable()


def test_interpolate_constant():
    assert interpolate_poly([(0, 1), (1, 1), (2, 1)], 2) == Poly.constant(1)


def test_interpolate_closed_form_at_level_one():
    k = F(1)
    samples = [(j, (j + k / 2) / (2 * k)) for j in map(F, (0, 1, 2))]
    assert interpolate_poly(samples, 2) == Poly([F(1, 4), F(1, 2)])


def test_interpolate_rejects_duplicates():
    with pytest.raises(ValueError, match="degenerate interpolation"):
        interpolate_poly([(0, 1), (0, 2)], 1)


def test_interpolate_needs_enough_points():
    with pytest.raises(ValueError, match="insufficient samples"):
        interpolate_poly([(0, 1), (1, 2)], 2)


def test_interpolate_checks_surplus_points():
    with pytest.raises(ValueError):
        interpolate_poly([(0, 0), (1, 1), (2, 4)], 1)


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=6),
       st.lists(rationals, min_size=7, max_size=7, unique=True))
def test_interpolation_round_trip(coeffs, xs):
    P = Poly(coeffs)
    d = max(P.degree, 0)
    got = interpolate_poly([(x, P(x)) for x in xs[: d + 1]], d)
    assert got == P


def test_rational_roots_split_and_residual():
    P = Poly.from_roots([(F(-1, 2), 2), (F(1, 2), 1)], lead=3) * Poly([1, 0, 1])
    roots, res = rational_roots(P)
    assert roots == [(F(-1, 2), 2), (F(1, 2), 1)]
    assert res == Poly([1, 0, 1])


@pytest.mark.parametrize("factors, T, expected", [
    (BICOLORED, 3, [1, 2, 4, 8]),
    (FOCK, 3, [1, 2, 4, 8]),
    ((), 5, [1, 0, 0, 0, 0, 0]),
    ((ProductFactor(1, 0),), 6, [1, 1, 2, 3, 5, 7, 11]),
    ((ProductFactor(0, 2, 1),), 4, [1, 0, -1, 0, 0]),
])
def test_product_series(factors, T, expected):
    s = product_series(factors, T)
    assert s.offset == 0
    assert list(s.coefficients) == expected


def test_bicolored_equals_fock_product():
    assert series_compare(product_series(BICOLORED, 30), product_series(FOCK, 30))


@given(st.integers(0, 25))
def test_pure_products_nonnegative_integers(T):
    for pattern in (BICOLORED, FOCK):
        cs = product_series(pattern, T).coefficients
        assert all(c >= 0 and c.denominator == 1 for c in cs)


def test_compare_reports_first_discrepancy():
    a = CharacterSeries(0, [1, 2, 4])
    b = CharacterSeries(0, [1, 2, 5])
    assert series_compare(a, a)
    cmp = series_compare(a, b)
    assert not cmp
    assert (cmp.degree, cmp.left, cmp.right) == (2, 4, 5)


def test_compare_incommensurate():
    with pytest.raises(ValueError, match="incommensurate gradings"):
        series_compare(CharacterSeries(0, [1]), CharacterSeries(F(1, 2), [1]))


def test_series_respects_offsets_and_truncation():
    a = CharacterSeries(F(1, 8), [1, 2, 4, 8])
    b = CharacterSeries(F(9, 8), [1, 1])
    c = a - b
    assert c.offset == F(1, 8) and list(c.coefficients) == [1, 1, 3]
    assert a.coefficient_at(F(17, 8)) == 4
    assert a.coefficient_at(F(-7, 8)) == 0
    with pytest.raises(IndexError):
        a.coefficient_at(F(41, 8))


@settings(max_examples=40)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6), rationals)
def test_compare_is_reflexive_and_symmetric(cs, off):
    a = CharacterSeries(off, cs)
    b = CharacterSeries(off, list(reversed(cs)))
    assert series_compare(a, a)
    assert bool(series_compare(a, b)) == bool(series_compare(b, a))


def test_json_uses_fraction_strings():
    js = CharacterSeries(F(1, 8), [1, F(1, 2)]).to_json()
    assert js == {"offset": "1/8", "order": 1, "coefficients": ["1/1", "1/2"]}

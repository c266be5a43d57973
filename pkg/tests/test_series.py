from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import from_sympy_coeffs, series_dict, to_sympy, x, y
from strategies import series, small_rationals
from wcongruence.series import (
    CapMismatchError,
    Series2,
    SubstitutionError,
    UnitDivisionError,
    UnsupportedMapError,
    s2_diff,
    s2_div,
    s2_invert_map,
    s2_mul,
    s2_subst,
)

F = Fraction


def pair(cap=None):
    return st.integers(0, 5).flatmap(lambda c: st.tuples(series(cap=c), series(cap=c)))


def test_constructors_and_derivative_convention():
    s = Series2.from_derivatives({(2, 1): 6, (0, 3): 12}, 4)
    # x**2 y * 6 / (2! 1!) and y**3 * 12 / 3!
    assert s.coeff(2, 1) == 3 and s.coeff(0, 3) == 2
    assert s.deriv(2, 1) == 6 and s.deriv(0, 3) == 12
    assert s.coeff(4, 0) == 0
    # terms above the cap are truncated away
    assert Series2.from_monomials({(3, 2): 1}, 4).is_zero()


def test_truncate_cannot_raise_cap_but_pad_can():
    s = Series2.x(2) * Series2.y(2)
    with pytest.raises(CapMismatchError):
        s.truncate(3)
    assert s.pad(4).coeff(1, 1) == 1 and s.pad(4).cap == 4


def test_cap_mismatch_is_an_error():
    with pytest.raises(CapMismatchError):
        Series2.x(2) + Series2.x(3)


@given(pair())
def test_product_matches_sympy(ab):
    a, b = ab
    expected = from_sympy_coeffs(to_sympy(a) * to_sympy(b), a.cap)
    assert series_dict(s2_mul(a, b)) == expected


@given(pair())
def test_ring_axioms(ab):
    a, b = ab
    c = a * b
    assert a + b == b + a
    assert c == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == Series2.zero(a.cap)


@given(series(min_cap=1), st.integers(0, 2), st.integers(0, 2))
def test_derivative_matches_sympy(s, j, k):
    d = s2_diff(s, j, k)
    assert d.cap == max(s.cap - j - k, 0)
    expected = from_sympy_coeffs(sp.diff(to_sympy(s), x, j, y, k), d.cap)
    if s.cap - j - k < 0:
        expected = {}
    assert series_dict(d) == expected


@given(series(min_cap=2))
def test_mixed_partials_commute(s):
    assert s2_diff(s2_diff(s, 1, 0), 0, 1) == s2_diff(s2_diff(s, 0, 1), 1, 0)


@given(pair(), small_rationals.filter(lambda v: v != 0))
def test_division_inverts_multiplication(ab, unit):
    a, b = ab
    g = b - b.coeff(0, 0) + unit
    assert s2_div(a, g) * g == a
    assert s2_div(a * g, g) == a


def test_geometric_series():
    one_minus_x = 1 - Series2.x(3)
    assert series_dict(s2_div(Series2.const(1, 3), one_minus_x)) == {(0, 0): 1, (1, 0): 1, (2, 0): 1, (3, 0): 1}


def test_division_by_nonunit_raises():
    with pytest.raises(UnitDivisionError):
        s2_div(Series2.const(1, 2), Series2.x(2))


def test_substitution_examples():
    u, v = Series2.x(4), Series2.y(4)
    xy = Series2.x(4) * Series2.y(4)
    assert series_dict(s2_subst(xy, u, u * v)) == {(2, 1): 1}
    assert series_dict(s2_subst(Series2.x(4), u * u, u**3 * v)) == {(2, 0): 1}
    with pytest.raises(SubstitutionError):
        s2_subst(xy, u + 1, v)


@settings(max_examples=15)
@given(series(cap=3), series(cap=3, zero_const=True), series(cap=3, zero_const=True))
def test_substitution_matches_sympy(f, px, py):
    expected = sp.expand(to_sympy(f).subs({x: to_sympy(px), y: to_sympy(py)}, simultaneous=True))
    assert series_dict(s2_subst(f, px, py)) == from_sympy_coeffs(expected, 3)


def test_inverse_of_a_known_map():
    X, Y = Series2.x(3), Series2.y(3)
    Gx, Gy = s2_invert_map(X + X**3, Y + X * X * Y)
    assert series_dict(Gx) == {(1, 0): 1, (3, 0): -1}
    assert series_dict(Gy) == {(0, 1): 1, (2, 1): -1}


@given(series(cap=4, zero_const=True), series(cap=4, zero_const=True))
def test_inverse_composes_to_identity(hx, hy):
    cap = 4
    X, Y = Series2.x(cap), Series2.y(cap)
    # strip the linear part so the map is tangent to the identity
    hx = hx - hx.coeff(1, 0) * X - hx.coeff(0, 1) * Y
    hy = hy - hy.coeff(1, 0) * X - hy.coeff(0, 1) * Y
    Fx, Fy = X + hx, Y + hy
    Gx, Gy = s2_invert_map(Fx, Fy)
    assert s2_subst(Fx, Gx, Gy) == X and s2_subst(Fy, Gx, Gy) == Y
    assert s2_subst(Gx, Fx, Fy) == X and s2_subst(Gy, Fx, Fy) == Y


def test_inverse_rejects_non_identity_linear_part():
    X, Y = Series2.x(3), Series2.y(3)
    with pytest.raises(UnsupportedMapError):
        s2_invert_map(2 * X, Y)


@given(series(max_cap=4), small_rationals, small_rationals)
def test_evaluation_matches_sympy(s, a, b):
    assert s(a, b) == Fraction(str(to_sympy(s).subs({x: sp.Rational(str(a)), y: sp.Rational(str(b))})))

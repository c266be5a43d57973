from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from oracle import from_sympy_coeffs, series_dict, to_sympy
from strategies import germs, series, small_rationals
from wcongruence.congruence import (
    CongruenceGerm,
    DegenerateJetError,
    GraphGerm,
    InsufficientOrderError,
    discriminant,
    germ_from_derivatives,
    h_series,
    hw_identity_residual,
    hw_pair,
    normal_congruence_from_graph,
    ridge_invariants,
    shape_coefficients,
    w_series,
)
from wcongruence.jets import monomial_family
from wcongruence.series import Series2, s2_diff

F = Fraction


def _sym(germ):
    return to_sympy(germ.xi1), to_sympy(germ.xi2)


@given(germs(min_cap=2, max_cap=5))
def test_w_matches_oracle(germ):
    W = w_series(germ)
    assert W.cap == max(germ.cap - 3, 0)
    assert series_dict(W) == from_sympy_coeffs(oracle.W(*_sym(germ)), W.cap)


@given(germs(min_cap=1, max_cap=5))
def test_discriminant_matches_oracle(germ):
    d = discriminant(germ)
    assert d.cap == germ.cap - 1
    assert series_dict(d) == from_sympy_coeffs(oracle.delta(*_sym(germ)), d.cap)


@settings(max_examples=15)
@given(germs(min_cap=3, max_cap=5))
def test_ridge_matches_oracle(germ):
    _, _, R = ridge_invariants(germ)
    assert series_dict(R) == from_sympy_coeffs(oracle.ridge_R(*_sym(germ), R.cap), R.cap)


def test_w_needs_second_order():
    with pytest.raises(InsufficientOrderError):
        w_series(CongruenceGerm(Series2.x(1), Series2.y(1)))


def test_w_vanishes_on_monomial_family():
    for m in (1, 2, 3, 4, F(5, 2)):
        assert w_series(monomial_family(m, 1 if m in (1, 2, 3, 4) else 0, 8)).is_zero()


def test_discriminant_examples():
    assert series_dict(discriminant(germ_from_derivatives({(1, 1): 1}, {(0, 2): -1, (2, 0): 2}, 5))) == {
        (2, 0): 8,
        (0, 2): 4,
    }
    assert series_dict(discriminant(monomial_family(2, 1, 5))) == {(0, 2): 9, (3, 0): 12}
    assert series_dict(discriminant(monomial_family(4, 1, 6))) == {(0, 2): 25, (5, 0): 20}
    assert series_dict(discriminant(monomial_family(F(5, 2), 0, 6))) == {(0, 2): F(49, 4)}


@given(germs(min_cap=2, max_cap=5))
def test_h_identity_with_corrected_sign(germ):
    assert hw_identity_residual(germ).is_zero()


def test_h_identity_sign_in_jet_variables():
    """Pointwise: H + 4 c^3 delta W vanishes as a polynomial in the 1-jets of a, b, c, d.

    Second derivatives of xi are first derivatives of the shape coefficients,
    with a_y = b_x and c_y = d_x.  The opposite sign (H = +4 c^3 delta W) would
    require H - 4 c^3 delta W = 0, which fails.
    """
    a, b, c, d, ax, ay, by, cx, cy, dy = sp.symbols("a b c d a_x a_y b_y c_x c_y d_y")
    bx, dx = ay, cy
    A = (a - d) * ax + c * dy + 2 * c * ay + b * cx
    B = (a - d) ** 2 * ax + (a - d) * (2 * c * ay - c * dy + b * cx) + 2 * c * (2 * b * dx + b * ax + c * by)
    Abar = cx * ((a - d) ** 2 + b * c) + c * (d - a) * (ax - 2 * dx) + c**2 * (dy - 2 * ay)
    Bbar = (
        -c * ((a - d) ** 2 + 2 * b * c) * (ax - 2 * dx)
        + ((a - d) ** 2 + 3 * b * c) * (a - d) * cx
        - c**2 * (a - d) * (2 * ay - dy)
        - 2 * c**3 * by
    )
    delta = (a - d) ** 2 + 4 * b * c
    H = c**2 * (A**2 * delta - B**2) - (Abar**2 * delta - Bbar**2)
    # xi derivatives in terms of the shape coefficients
    x1x, x1y, x2x, x2y = -a, -b, -c, -d
    x1xx, x1xy, x1yy = -ax, -ay, -by
    x2xx, x2xy, x2yy = -cx, -cy, -dy
    W = (
        (x2y - x1x) * (x2xx * x1yy - x1xx * x2yy)
        - 2 * x1y * (x1xx * x2xy - x2xx * x1xy)
        + 2 * x2x * (x1xy * x2yy - x1yy * x2xy)
    )
    assert sp.expand(H + 4 * c**3 * delta * W) == 0
    assert sp.expand(H - 4 * c**3 * delta * W) != 0


def test_hw_pair_on_m2_germ_is_zero():
    H, c3dW = hw_pair(monomial_family(2, 1, 6))
    assert H.is_zero() and c3dW.is_zero()


@given(series(cap=5), series(cap=5))
def test_w_for_diagonal_shape_operator(fa, fd):
    # a = a(x), d = d(y), b = c = 0  ->  W = (d - a) a_x d_y
    cap = 5
    a = Series2.from_monomials({(j, 0): fa.coeff(j, 0) for j in range(cap)}, cap - 1)
    d = Series2.from_monomials({(0, k): fd.coeff(0, k) for k in range(cap)}, cap - 1)
    xi1 = Series2.from_monomials({(j + 1, 0): -a.coeff(j, 0) / (j + 1) for j in range(cap)}, cap)
    xi2 = Series2.from_monomials({(0, k + 1): -d.coeff(0, k) / (k + 1) for k in range(cap)}, cap)
    germ = CongruenceGerm(xi1, xi2)
    s = shape_coefficients(germ)
    assert s.b.is_zero() and s.c.is_zero()
    cap_w = cap - 3
    expected = (d - a).truncate(cap_w) * s2_diff(a, 1, 0).truncate(cap_w) * s2_diff(d, 0, 1).truncate(cap_w)
    assert w_series(germ) == expected


def test_h_examples():
    g = monomial_family(2, 1, 7)
    assert h_series(g) == s2_diff(g.xi2, 1, 0).truncate(4)
    g = CongruenceGerm(Series2.from_monomials({(1, 1): 1}, 5), Series2.from_monomials({(0, 2): F(-1, 2)}, 5))
    assert h_series(g).is_zero()
    with pytest.raises(DegenerateJetError, match="degenerate 2-jet"):
        h_series(CongruenceGerm(Series2.zero(4), Series2.zero(4)))


@given(st.lists(small_rationals, min_size=12, max_size=12), small_rationals.filter(lambda v: v != 0))
def test_h_factorization(vals, p11):
    # normalized umbilic 2-jet plus arbitrary higher data: W = den (xi2_x - h)
    p = {(1, 1): p11, (3, 0): vals[0], (2, 1): vals[1], (1, 2): vals[2], (0, 3): vals[3], (4, 0): vals[4]}
    q = {(0, 2): -2 * p11, (3, 0): vals[5], (2, 1): vals[6], (1, 2): vals[7], (0, 3): vals[8], (2, 2): vals[9]}
    q[(4, 0)] = vals[10]
    q[(1, 3)] = vals[11]
    germ = germ_from_derivatives(p, q, 5)
    cap = 2
    xi1, xi2 = germ.xi1, germ.xi2
    den = 2 * (s2_diff(xi1, 1, 1) * s2_diff(xi2, 0, 2) - s2_diff(xi1, 0, 2) * s2_diff(xi2, 1, 1)).truncate(cap)
    assert w_series(germ) == den * (s2_diff(xi2, 1, 0).truncate(cap) - h_series(germ))


# --- normal congruence of a graph --------------------------------------


def _graph(g20, g02, g30, g21, g12, g03, cap=4):
    return GraphGerm(
        Series2.from_derivatives(
            {(2, 0): g20, (0, 2): g02, (3, 0): g30, (2, 1): g21, (1, 2): g12, (0, 3): g03},
            cap,
        )
    )


def test_graph_with_linear_terms_is_rejected():
    with pytest.raises(ValueError):
        GraphGerm(Series2.from_monomials({(1, 0): 1}, 3))


def test_graph_shape_values_at_origin():
    germ = normal_congruence_from_graph(_graph(2, 5, 3, 7, 11, 13))
    s = shape_coefficients(germ)
    assert (s.a.deriv(0, 0), s.d.deriv(0, 0), s.b.deriv(0, 0), s.c.deriv(0, 0)) == (2, 5, 0, 0)
    assert (s.a.deriv(1, 0), s.a.deriv(0, 1)) == (3, 7)
    assert (s.d.deriv(1, 0), s.d.deriv(0, 1)) == (11, 13)
    assert s.b.deriv(1, 0) == s.c.deriv(1, 0) == 7
    assert s.b.deriv(0, 1) == s.c.deriv(0, 1) == 11


def test_flat_graph_gives_vertical_congruence():
    germ = normal_congruence_from_graph(GraphGerm(Series2.zero(4)))
    assert germ.xi1.is_zero() and germ.xi2.is_zero()


@given(st.lists(small_rationals, min_size=6, max_size=6))
def test_graph_w_at_origin(v):
    g20, g02, g30, g21, g12, g03 = v
    if g20 == g02:
        g02 += 1
    W0 = w_series(normal_congruence_from_graph(_graph(g20, g02, g30, g21, g12, g03))).deriv(0, 0)
    assert W0 == (g02 - g20) * (g30 * g03 - g21 * g12)

"""Independent sympy oracle: formulas typed from scratch on full polynomials."""

from __future__ import annotations

from fractions import Fraction
from math import factorial

import sympy as sp

x, y = sp.symbols("x y")


def rat(v) -> sp.Rational:
    v = Fraction(v)
    return sp.Rational(v.numerator, v.denominator)


def to_sympy(series) -> sp.Expr:
    return sp.Add(*[rat(c) * x**j * y**k for (j, k), c in series.items()])


def from_sympy_coeffs(expr, cap: int) -> dict:
    """Monomial coefficients of total degree <= cap as Fractions (zeros dropped)."""
    poly = sp.Poly(sp.expand(expr), x, y)
    out = {}
    for (j, k), c in poly.terms():
        if j + k <= cap and c != 0:
            out[(j, k)] = Fraction(int(c.p), int(c.q))
    return out


def series_dict(series) -> dict:
    return {jk: c for jk, c in series.items() if c}


def W(f1, f2):
    d = sp.diff
    return sp.expand(
        (d(f2, y) - d(f1, x)) * (d(f2, x, 2) * d(f1, y, 2) - d(f1, x, 2) * d(f2, y, 2))
        - 2 * d(f1, y) * (d(f1, x, 2) * d(f2, x, y) - d(f2, x, 2) * d(f1, x, y))
        + 2 * d(f2, x) * (d(f1, x, y) * d(f2, y, 2) - d(f1, y, 2) * d(f2, x, y))
    )


def shape(f1, f2):
    return -sp.diff(f1, x), -sp.diff(f1, y), -sp.diff(f2, x), -sp.diff(f2, y)


def delta(f1, f2):
    a, b, c, d = shape(f1, f2)
    return sp.expand((a - d) ** 2 + 4 * b * c)


def _trunc(expr, N):
    poly = sp.Poly(sp.expand(expr), x, y)
    return sp.Add(*[c * x**j * y**k for (j, k), c in poly.terms() if j + k <= N])


def ridge_R(f1, f2, N):
    """``R = A**2 delta - B**2`` through total degree ``N`` (products truncated as they form)."""
    a, b, c, d = shape(f1, f2)
    ax, ay, bx, by = sp.diff(a, x), sp.diff(a, y), sp.diff(b, x), sp.diff(b, y)
    cx, cy, dx, dy = sp.diff(c, x), sp.diff(c, y), sp.diff(d, x), sp.diff(d, y)

    def t(e):
        return _trunc(e, N)

    amd = t(a - d)
    A = t(amd * ax + c * dy + 2 * c * ay + b * cx)
    B = t(t(amd**2) * ax + amd * (2 * c * ay - c * dy + b * cx) + 2 * c * (2 * b * dx + b * ax + c * by))
    delta = t(amd**2 + 4 * b * c)
    return t(t(A**2) * delta - B**2)


def derivative_at_origin(expr, j: int, k: int):
    """``d^(j+k) expr / dx^j dy^k`` at 0 from the monomial coefficient."""
    c = sp.Poly(sp.expand(expr), x, y).coeff_monomial(x**j * y**k)
    return Fraction(int(sp.Rational(c).p), int(sp.Rational(c).q)) * factorial(j) * factorial(k)

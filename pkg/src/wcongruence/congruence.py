"""
Geometric invariants of a line-congruence germ.

The congruence is the family of lines through ``(x, y, 0)`` with direction
``(xi1(x, y), xi2(x, y), 1)``.  All invariants are polynomial in the jets of
``xi1, xi2`` and are computed exactly on truncated series.  Each formula
truncates to the degree fixed by its highest derivative:

==================  ==========
quantity            cap
==================  ==========
shape a, b, c, d    cap - 1
delta               cap - 1
A, B, Abar, Bbar    cap - 2
W, R, S, H, h       cap - 3
==================  ==========

(caps floor at 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .series import Series2, s2_diff, s2_div, s2_invert_map, s2_subst

__all__ = [
    "CongruenceGerm",
    "ShapeCoefficients",
    "GraphGerm",
    "InsufficientOrderError",
    "DegenerateJetError",
    "germ_from_derivatives",
    "shape_coefficients",
    "discriminant",
    "w_series",
    "ridge_invariants",
    "subparabolic_invariants",
    "hw_pair",
    "hw_identity_residual",
    "h_series",
    "normal_congruence_from_graph",
]


class InsufficientOrderError(ValueError):
    """The germ does not carry enough orders for the requested invariant."""


class DegenerateJetError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class CongruenceGerm:
    xi1: Series2
    xi2: Series2

    def __post_init__(self):
        if self.xi1.cap != self.xi2.cap:
            raise ValueError(f"xi1 and xi2 caps differ ({self.xi1.cap} vs {self.xi2.cap})")

    @property
    def cap(self) -> int:
        return self.xi1.cap

    def p(self, j: int, k: int) -> Fraction:
        """Derivative coefficient ``p_jk`` of ``xi1``."""
        return self.xi1.deriv(j, k)

    def q(self, j: int, k: int) -> Fraction:
        """Derivative coefficient ``q_jk`` of ``xi2``."""
        return self.xi2.deriv(j, k)

    def with_cap(self, cap: int) -> CongruenceGerm:
        return CongruenceGerm(self.xi1.with_cap(cap), self.xi2.with_cap(cap))

    def replace(self, which: str, j: int, k: int, value) -> CongruenceGerm:
        """Copy with one derivative coefficient overwritten (``which`` is 'p' or 'q')."""
        series = self.xi1 if which == "p" else self.xi2
        derivs = series.derivatives()
        derivs[(j, k)] = Fraction(value)
        new = Series2.from_derivatives(derivs, series.cap)
        if which == "p":
            return CongruenceGerm(new, self.xi2)
        return CongruenceGerm(self.xi1, new)


def germ_from_derivatives(p: dict, q: dict, cap: int) -> CongruenceGerm:
    """Germ from derivative coefficients ``{(j, k): p_jk}`` and ``{(j, k): q_jk}``."""
    return CongruenceGerm(Series2.from_derivatives(p, cap), Series2.from_derivatives(q, cap))


@dataclass(frozen=True)
class ShapeCoefficients:
    a: Series2
    b: Series2
    c: Series2
    d: Series2


@dataclass(frozen=True)
class GraphGerm:
    """Height function of a surface graph tangent to ``z = 0`` at the origin."""

    g: Series2

    def __post_init__(self):
        g = self.g
        bad = {jk: g.coeff(*jk) for jk in ((0, 0), (1, 0), (0, 1)) if jk[0] + jk[1] <= g.cap and g.coeff(*jk)}
        if bad:
            raise ValueError(f"graph must have zero constant and linear terms, got {bad}")


def _common(*series: Series2, cap: int | None = None):
    if cap is None:
        cap = min(s.cap for s in series)
    return [s.truncate(cap) for s in series]


def shape_coefficients(germ: CongruenceGerm) -> ShapeCoefficients:
    xi1, xi2 = germ.xi1, germ.xi2
    return ShapeCoefficients(
        a=-s2_diff(xi1, 1, 0),
        b=-s2_diff(xi1, 0, 1),
        c=-s2_diff(xi2, 1, 0),
        d=-s2_diff(xi2, 0, 1),
    )


def discriminant(germ: CongruenceGerm) -> Series2:
    """``delta = (a - d)**2 + 4 b c``; vanishes where the focal sheets meet."""
    s = shape_coefficients(germ)
    amd = s.a - s.d
    return amd * amd + 4 * (s.b * s.c)


def _require(germ: CongruenceGerm, name: str):
    if germ.cap < 2:
        raise InsufficientOrderError(f"{name} needs cap >= 2, germ has cap {germ.cap}")


def _out_cap(germ: CongruenceGerm) -> int:
    return max(germ.cap - 3, 0)


def _second_derivatives(germ: CongruenceGerm, cap: int):
    xi1, xi2 = germ.xi1, germ.xi2
    d = {}
    for name, (j, k) in (("xx", (2, 0)), ("xy", (1, 1)), ("yy", (0, 2))):
        d["1" + name] = s2_diff(xi1, j, k).truncate(cap)
        d["2" + name] = s2_diff(xi2, j, k).truncate(cap)
    return d


def w_series(germ: CongruenceGerm) -> Series2:
    """The Weingarten polynomial ``W``; the congruence is Weingarten iff ``W == 0``."""
    _require(germ, "W")
    cap = _out_cap(germ)
    xi1, xi2 = germ.xi1, germ.xi2
    x1x, x1y, x2x, x2y = _common(
        s2_diff(xi1, 1, 0), s2_diff(xi1, 0, 1), s2_diff(xi2, 1, 0), s2_diff(xi2, 0, 1), cap=cap
    )
    d = _second_derivatives(germ, cap)
    return (
        (x2y - x1x) * (d["2xx"] * d["1yy"] - d["1xx"] * d["2yy"])
        - 2 * x1y * (d["1xx"] * d["2xy"] - d["2xx"] * d["1xy"])
        + 2 * x2x * (d["1xy"] * d["2yy"] - d["1yy"] * d["2xy"])
    )


def _shape_with_derivatives(germ: CongruenceGerm, cap: int):
    s = shape_coefficients(germ)
    a, b, c, d = _common(s.a, s.b, s.c, s.d, cap=cap)
    dx = {n: s2_diff(v, 1, 0).truncate(cap) for n, v in zip("abcd", (s.a, s.b, s.c, s.d))}
    dy = {n: s2_diff(v, 0, 1).truncate(cap) for n, v in zip("abcd", (s.a, s.b, s.c, s.d))}
    return a, b, c, d, dx, dy


def ridge_invariants(germ: CongruenceGerm):
    """Ridge data ``(A, B, R)`` with ``R = A**2 delta - B**2`` (union of both ridges)."""
    _require(germ, "ridge invariants")
    a, b, c, d, dx, dy = _shape_with_derivatives(germ, max(germ.cap - 2, 0))
    amd = a - d
    A = amd * dx["a"] + c * dy["d"] + 2 * (c * dy["a"]) + b * dx["c"]
    B = (
        amd * amd * dx["a"]
        + amd * (2 * (c * dy["a"]) - c * dy["d"] + b * dx["c"])
        + 2 * c * (2 * (b * dx["d"]) + b * dx["a"] + c * dy["b"])
    )
    cap = _out_cap(germ)
    A3, B3, delta = _common(A, B, discriminant(germ), cap=cap)
    return A, B, A3 * A3 * delta - B3 * B3


def subparabolic_invariants(germ: CongruenceGerm):
    """Subparabolic data ``(Abar, Bbar, S)`` with ``S = Abar**2 delta - Bbar**2``."""
    _require(germ, "subparabolic invariants")
    a, b, c, d, dx, dy = _shape_with_derivatives(germ, max(germ.cap - 2, 0))
    amd = a - d
    amd2 = amd * amd
    bc = b * c
    cc = c * c
    Abar = dx["c"] * (amd2 + bc) - c * amd * (dx["a"] - 2 * dx["d"]) + cc * (dy["d"] - 2 * dy["a"])
    Bbar = (
        -(c * (amd2 + 2 * bc) * (dx["a"] - 2 * dx["d"]))
        + (amd2 + 3 * bc) * amd * dx["c"]
        - cc * amd * (2 * dy["a"] - dy["d"])
        - 2 * (cc * c * dy["b"])
    )
    cap = _out_cap(germ)
    A3, B3, delta = _common(Abar, Bbar, discriminant(germ), cap=cap)
    return Abar, Bbar, A3 * A3 * delta - B3 * B3


def hw_pair(germ: CongruenceGerm):
    """``(H, c**3 * delta * W)`` at the common cap, with ``H = c**2 R - S``."""
    _require(germ, "H")
    cap = _out_cap(germ)
    _, _, R = ridge_invariants(germ)
    _, _, S = subparabolic_invariants(germ)
    c, delta, W = _common(shape_coefficients(germ).c, discriminant(germ), w_series(germ), cap=cap)
    return c * c * R - S, c * c * c * delta * W


def hw_identity_residual(germ: CongruenceGerm) -> Series2:
    """Residual of the exact identity ``c**2 R - S = -4 c**3 delta W``.

    The result is the zero series for every germ.  Note the minus sign:
    with the ridge and subparabolic formulas used here, ``H`` equals
    ``-4 c**3 delta W``, not ``+4 c**3 delta W``.
    """
    H, c3dW = hw_pair(germ)
    return H + 4 * c3dW


def _h_parts(germ: CongruenceGerm, cap: int):
    xi1, xi2 = germ.xi1, germ.xi2
    x1x, x1y, x2y = _common(s2_diff(xi1, 1, 0), s2_diff(xi1, 0, 1), s2_diff(xi2, 0, 1), cap=cap)
    d = _second_derivatives(germ, cap)
    num = (x1x - x2y) * (d["2xx"] * d["1yy"] - d["1xx"] * d["2yy"]) + 2 * x1y * (
        d["1xx"] * d["2xy"] - d["2xx"] * d["1xy"]
    )
    den = 2 * (d["1xy"] * d["2yy"] - d["1yy"] * d["2xy"])
    return num, den


def h_series(germ: CongruenceGerm) -> Series2:
    """``h`` with ``W = den * (xi2_x - h)``; equals ``xi2_x`` on a W-congruence."""
    _require(germ, "h")
    num, den = _h_parts(germ, _out_cap(germ))
    if den.coeff(0, 0) == 0:
        raise DegenerateJetError("degenerate 2-jet: 2(xi1_xy xi2_yy - xi1_yy xi2_xy) vanishes at the origin")
    return s2_div(num, den)


def normal_congruence_from_graph(graph: GraphGerm) -> CongruenceGerm:
    """Normal congruence of ``z = g(x, y)`` written over the plane ``z = 0``.

    The normal line at ``(x, y, g)`` meets ``z = 0`` at
    ``(X, Y) = (x + g_x g, y + g_y g)`` with direction ``(-g_x, -g_y, 1)``;
    the germ is re-expressed in the ``(X, Y)`` chart.
    """
    g = graph.g
    if g.cap < 3:
        raise InsufficientOrderError(f"graph needs cap >= 3, got {g.cap}")
    cap = g.cap - 1
    gx = s2_diff(g, 1, 0)
    gy = s2_diff(g, 0, 1)
    g0 = g.truncate(cap)
    Fx = Series2.x(cap) + gx * g0
    Fy = Series2.y(cap) + gy * g0
    Gx, Gy = s2_invert_map(Fx, Fy)
    return CongruenceGerm(s2_subst(-gx, Gx, Gy), s2_subst(-gy, Gx, Gy))

"""
Principal lines of a line congruence as a binary differential equation.

A direction ``(dx, dy)`` is principal when ``d xi`` is parallel to it, which gives::

    P dy**2 + Q dx dy + Rc dx**2 = 0,   P = xi1_y,  Q = xi1_x - xi2_y,  Rc = -xi2_x

with discriminant ``Q**2 - 4 P Rc = delta``.  The numerical part integrates
both direction fields; the exact part pulls the equation back through the
blow-up charts used near umbilics.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as npoly

from .congruence import CongruenceGerm, discriminant
from .series import Series2, s2_diff, s2_subst

log = logging.getLogger(__name__)

__all__ = [
    "PrincipalBDE",
    "BlowUpChart",
    "CHARTS",
    "SingularPoint",
    "FlowFigure",
    "BDEConsistencyError",
    "ChartMismatchError",
    "DegenerateFieldError",
    "principal_bde",
    "bde_case",
    "slope_pair",
    "integrate_configuration",
    "pullback",
    "blow_up_analysis",
    "valid_charts",
    "figure_csv",
    "figure_svg",
]


class BDEConsistencyError(AssertionError):
    pass


class ChartMismatchError(ValueError):
    pass


class DegenerateFieldError(ValueError):
    pass


@dataclass(frozen=True)
class PrincipalBDE:
    P: Series2
    Q: Series2
    Rc: Series2

    @property
    def delta(self) -> Series2:
        return self.Q * self.Q - 4 * (self.P * self.Rc)

    def is_zero(self) -> bool:
        return self.P.is_zero() and self.Q.is_zero() and self.Rc.is_zero()


def principal_bde(germ: CongruenceGerm) -> PrincipalBDE:
    bde = PrincipalBDE(
        P=s2_diff(germ.xi1, 0, 1),
        Q=s2_diff(germ.xi1, 1, 0) - s2_diff(germ.xi2, 0, 1),
        Rc=-s2_diff(germ.xi2, 1, 0),
    )
    if germ.cap >= 1 and bde.delta != discriminant(germ):
        raise BDEConsistencyError("Q**2 - 4 P Rc differs from delta; sign convention broken")
    return bde


# --- float evaluation -------------------------------------------------


class _FloatField:
    """Vectorised float evaluation of ``P, Q, Rc`` and the branch directions."""

    def __init__(self, bde: PrincipalBDE):
        self.P = bde.P.to_array()
        self.Q = bde.Q.to_array()
        self.R = bde.Rc.to_array()

    def coeffs(self, x, y):
        return npoly.polyval2d(x, y, self.P), npoly.polyval2d(x, y, self.Q), npoly.polyval2d(x, y, self.R)

    def directions(self, x, y, branch: int):
        """Unit eigen-directions for ``branch`` and ``delta`` at the points.

        Branch 1 belongs to ``lambda1 = (a + d + sqrt(delta))/2`` of the shape
        operator ``[[a, b], [c, d]] = -D xi``; branch 2 to ``lambda2``.
        """
        P, Q, R = self.coeffs(x, y)
        delta = Q * Q - 4 * P * R
        root = np.sqrt(np.maximum(delta, 0.0))
        sign = 1.0 if branch == 1 else -1.0
        # (b, lambda - a) and (lambda - d, c) with b = -P, c = Rc, d - a = Q
        v1 = np.stack([-P, (Q + sign * root) / 2])
        v2 = np.stack([(-Q + sign * root) / 2, R])
        n1 = np.hypot(*v1)
        n2 = np.hypot(*v2)
        v = np.where(n1 >= n2, v1, v2)
        n = np.maximum(n1, n2)
        with np.errstate(invalid="ignore", divide="ignore"):
            v = v / n
        return v[0], v[1], delta


def slope_pair(bde: PrincipalBDE, point, window: float | None = None, tol: float = 1e-12):
    """The two principal directions at ``point`` as unit vectors ``(dx, dy)``.

    Returns ``None`` (the degenerate marker) when ``delta`` at the point is
    below ``tol`` or the field vanishes there.
    """
    x, y = float(point[0]), float(point[1])
    if window is not None and (abs(x) > window or abs(y) > window):
        raise ValueError(f"point {point} outside the trust window {window}")
    f = _FloatField(bde)
    out = []
    for branch in (1, 2):
        dx, dy, delta = f.directions(np.array(x), np.array(y), branch)
        if not delta >= tol or not np.isfinite(dx):
            return None
        out.append((float(dx), float(dy)))
    return tuple(out)


# --- integration ------------------------------------------------------


@dataclass
class FlowFigure:
    window: float
    step: float
    polylines: list  # (branch, [(x, y), ...])
    discriminant_curve: list  # list of segments [(x, y), ...]
    umbilic: tuple = (0.0, 0.0)
    flags: list = field(default_factory=list)


def _seeds(window: float, per_side: int):
    inner = 0.98 * window
    pts = []
    for i in range(per_side):
        t = -inner + 2 * inner * (i + 0.5) / per_side
        pts += [(t, -inner), (inner, t), (-t, inner), (-inner, -t)]
    r = 0.1 * window
    for i in range(8):
        a = 2 * math.pi * (i + 0.5) / 8
        pts.append((r * math.cos(a), r * math.sin(a)))
    return pts


def _integrate(field_: _FloatField, branch, x0, y0, d0, window, step, max_steps):
    """Lockstep RK4 along the unit direction field with orientation continuity."""
    n = len(x0)
    x, y = x0.copy(), y0.copy()
    px, py = d0[0].copy(), d0[1].copy()
    alive = np.ones(n, dtype=bool)
    tracks = [[(x0[i], y0[i])] for i in range(n)]
    stop_delta = step * step

    def oriented(xs, ys, refx, refy):
        dx, dy, delta = field_.directions(xs, ys, branch)
        s = np.where(dx * refx + dy * refy < 0, -1.0, 1.0)
        return dx * s, dy * s, delta

    for _ in range(max_steps):
        if not alive.any():
            break
        k1x, k1y, delta = oriented(x, y, px, py)
        k2x, k2y, _ = oriented(x + 0.5 * step * k1x, y + 0.5 * step * k1y, k1x, k1y)
        k3x, k3y, _ = oriented(x + 0.5 * step * k2x, y + 0.5 * step * k2y, k1x, k1y)
        k4x, k4y, _ = oriented(x + step * k3x, y + step * k3y, k1x, k1y)
        nx = x + step * (k1x + 2 * k2x + 2 * k3x + k4x) / 6
        ny = y + step * (k1y + 2 * k2y + 2 * k3y + k4y) / 6
        _, _, ndelta = field_.directions(nx, ny, branch)
        ok = (
            alive
            & (delta >= stop_delta)
            & np.isfinite(nx)
            & np.isfinite(ny)
            & (np.abs(nx) <= window)
            & (np.abs(ny) <= window)
            & (ndelta >= stop_delta)
            & (np.hypot(nx - x, ny - y) <= 2 * step)
        )
        for i in np.flatnonzero(ok):
            tracks[i].append((float(nx[i]), float(ny[i])))
        alive = ok
        x = np.where(ok, nx, x)
        y = np.where(ok, ny, y)
        px, py = np.where(ok, k1x, px), np.where(ok, k1y, py)
    return tracks, alive


def _discriminant_segments(field_: _FloatField, window: float, resolution: int = 201):
    import contourpy

    g = np.linspace(-window, window, resolution)
    X, Y = np.meshgrid(g, g)
    P, Q, R = field_.coeffs(X, Y)
    D = Q * Q - 4 * P * R
    if D.min() > 0 or D.max() < 0:
        return []
    out = []
    for seg in contourpy.contour_generator(g, g, D).lines(0.0):
        pts = []
        for px, py in seg:
            p = (float(px), float(py))
            if not pts or p != pts[-1]:
                pts.append(p)
        if len(pts) >= 2:
            out.append(pts)
    return out


def integrate_configuration(bde: PrincipalBDE, window: float, step: float, seeds: int) -> FlowFigure:
    """Principal lines of both branches inside ``[-window, window]**2``.

    Trajectories start from ``seeds`` points per side of the window and from
    8 points on a circle of radius ``window/10``.  Each is traced in both
    orientations with fixed-step RK4 and stops at the window boundary, after
    ``8 window / step`` steps, or where ``delta < step**2``.
    """
    if window <= 0 or step <= 0 or seeds < 1:
        raise ValueError("window, step and seeds must be positive")
    if bde.is_zero():
        raise DegenerateFieldError("degenerate field: P, Q and Rc vanish identically")
    field_ = _FloatField(bde)
    pts = _seeds(window, seeds)
    x0 = np.array([p[0] for p in pts])
    y0 = np.array([p[1] for p in pts])
    max_steps = int(math.ceil(8 * window / step))
    polylines = []
    flags = []
    for branch in (1, 2):
        dx, dy, delta = field_.directions(x0, y0, branch)
        usable = (delta >= step * step) & np.isfinite(dx)
        if not usable.all():
            flags.append(f"branch {branch}: {int((~usable).sum())} seeds where delta < step**2 (no real principal directions)")
        idx = np.flatnonzero(usable)
        if idx.size == 0:
            continue
        d = np.stack([dx[idx], dy[idx]])
        fwd, fwd_alive = _integrate(field_, branch, x0[idx], y0[idx], d, window, step, max_steps)
        bwd, bwd_alive = _integrate(field_, branch, x0[idx], y0[idx], -d, window, step, max_steps)
        if fwd_alive.any() or bwd_alive.any():
            flags.append(f"branch {branch}: step limit reached on some trajectories")
        for f, b in zip(fwd, bwd):
            line = b[::-1] + f[1:]
            if len(line) >= 2:
                polylines.append((branch, line))
    segments = _discriminant_segments(field_, window)
    return FlowFigure(window=window, step=step, polylines=polylines, discriminant_curve=segments, flags=flags)


# --- export -----------------------------------------------------------


def _fmt(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def figure_csv(fig: FlowFigure) -> str:
    """``branch,traj_id,x,y`` rows; discriminant rows carry ``disc`` and a segment index."""
    rows = ["branch,traj_id,x,y"]
    for tid, (branch, line) in enumerate(fig.polylines):
        rows += [f"{branch},{tid},{_fmt(x)},{_fmt(y)}" for x, y in line]
    for sid, seg in enumerate(fig.discriminant_curve):
        rows += [f"disc,{sid},{_fmt(x)},{_fmt(y)}" for x, y in seg]
    return "\n".join(rows) + "\n"


def figure_svg(fig: FlowFigure, version: str = "") -> str:
    W = fig.window
    sw = _fmt(W / 250)
    dash = f"{_fmt(W / 40)} {_fmt(W / 80)}"
    styles = {
        1: f'fill="none" stroke="#1f4e9c" stroke-width="{sw}"',
        2: f'fill="none" stroke="#2a8a3e" stroke-width="{sw}" stroke-dasharray="{dash}"',
        "disc": f'fill="none" stroke="#c0392b" stroke-width="{_fmt(W / 125)}"',
    }

    def path(line, style, kind):
        d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in line)
        return f'<path class="{kind}" {style} d="{d}"/>'

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- wcongruence {version} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(-W)} {_fmt(-W)} {_fmt(2 * W)} {_fmt(2 * W)}">',
        '<g transform="scale(1,-1)">',
    ]
    out += [path(line, styles[b], f"branch{b}") for b, line in fig.polylines]
    out += [path(seg, styles["disc"], "disc") for seg in fig.discriminant_curve]
    ux, uy = fig.umbilic
    out.append(f'<circle class="umbilic" cx="{_fmt(ux)}" cy="{_fmt(uy)}" r="{_fmt(W / 80)}" fill="black"/>')
    out += ["</g>", "</svg>"]
    return "\n".join(out) + "\n"


# --- blow-up ----------------------------------------------------------


@dataclass(frozen=True)
class BlowUpChart:
    """``(x, y) = (sx * u**a1 * v**b1, u**a2 * v**b2)``; ``exceptional`` is 0 for ``u``, 1 for ``v``."""

    name: str
    x_term: tuple  # (sign, a, b)
    y_term: tuple
    exceptional: int

    def maps(self, cap: int):
        def mono(t):
            s, a, b = t
            return Series2.from_monomials({(a, b): s}, cap)

        return mono(self.x_term), mono(self.y_term)


CHARTS = {
    "H": BlowUpChart("H", (1, 1, 0), (1, 1, 1), 0),
    "H1": BlowUpChart("H1", (1, 1, 1), (1, 0, 1), 1),
    "Hp": BlowUpChart("Hp", (1, 2, 0), (1, 3, 1), 0),
    "Hn": BlowUpChart("Hn", (-1, 2, 0), (1, 3, 1), 0),
}


@dataclass(frozen=True)
class SingularPoint:
    v0: float
    jacobian_det: float
    trace: float
    type: str


def bde_case(bde: PrincipalBDE) -> Fraction:
    """``m = Q_y / P_x - 1`` for a BDE coming from a normalized umbilic."""
    Px, Py = bde.P.deriv(1, 0), bde.P.deriv(0, 1)
    Qx, Qy = bde.Q.deriv(1, 0), bde.Q.deriv(0, 1)
    if Px == 0 or Py != 0 or Qx != 0 or any(s.deriv(0, 0) for s in (bde.P, bde.Q, bde.Rc)):
        raise ChartMismatchError("BDE is not that of a normalized umbilic (need P = p11 x + ..., Q = c y + ...)")
    return Qy / Px - 1


def valid_charts(m) -> tuple:
    if m == 1:
        return ("H", "H1")
    if m == 2:
        return ("Hp", "Hn", "H1")
    return ()


def pullback(bde: PrincipalBDE, chart: BlowUpChart, jet: int = 4):
    """Exact pullback of the ``jet``-jet of the BDE through ``chart``.

    Returns monomial dicts ``(C_uu, C_uv, C_vv)`` of the coefficients of
    ``du**2``, ``du dv`` and ``dv**2``.
    """
    deg = max(chart.x_term[1] + chart.x_term[2], chart.y_term[1] + chart.y_term[2])
    cap = deg * (jet + 2) + 2
    X, Y = chart.maps(cap)
    Xu, Xv = s2_diff(X, 1, 0).pad(cap), s2_diff(X, 0, 1).pad(cap)
    Yu, Yv = s2_diff(Y, 1, 0).pad(cap), s2_diff(Y, 0, 1).pad(cap)
    P, Q, R = (s2_subst(s.with_cap(jet).pad(cap), X, Y) for s in (bde.P, bde.Q, bde.Rc))
    Cuu = P * Yu * Yu + Q * Xu * Yu + R * Xu * Xu
    Cuv = 2 * (P * Yu * Yv) + Q * (Xu * Yv + Xv * Yu) + 2 * (R * Xu * Xv)
    Cvv = P * Yv * Yv + Q * Xv * Yv + R * Xv * Xv
    for s in (Cuu, Cuv, Cvv):
        if s.valuation() is not None and max(j + k for (j, k), _ in s.items()) >= cap:
            raise AssertionError("pullback cap too small")
    return tuple({jk: c for jk, c in s.items()} for s in (Cuu, Cuv, Cvv))


def _val(poly: dict, e: int):
    return min((jk[e] for jk in poly), default=None)


def blow_up_analysis(bde: PrincipalBDE, chart: BlowUpChart | str) -> list[SingularPoint]:
    """Singular points on the exceptional line of ``chart`` and their linear type.

    After the pullback the common power of the exceptional variable ``e`` is
    removed so that the ``do**2`` coefficient is ``O(e**2)`` and the mixed one
    ``O(e)``.  Near ``e = 0`` the equation factors as ``de (F do + G de)``; the
    singular points of the field ``X = (F, -G)`` sit at the roots of ``G(0, o)``
    and have ``det DX = -F_e G_o``.
    """
    if isinstance(chart, str):
        chart = CHARTS[chart]
    m = bde_case(bde)
    if chart.name not in valid_charts(m):
        raise ChartMismatchError(f"chart {chart.name} is not used for m = {m}")
    Cuu, Cuv, Cvv = pullback(bde, chart)
    e = chart.exceptional
    o = 1 - e
    Cee, Ceo, Coo = (Cuu, Cuv, Cvv) if e == 0 else (Cvv, Cuv, Cuu)
    vals = [_val(Coo, e), _val(Ceo, e), _val(Cee, e)]
    shifts = [v - s for v, s in zip(vals, (2, 1, 0)) if v is not None]
    if not shifts:
        raise DegenerateFieldError("pullback vanishes identically")
    k = min(shifts)

    def lowered(poly):
        out = {}
        for jk, c in poly.items():
            j = list(jk)
            j[e] -= k
            out[tuple(j)] = c
        return out

    G, F = lowered(Cee), lowered(Ceo)
    # G(0, o) and the needed derivatives as polynomials in o
    g0 = {}
    ge = {}
    fe = {}
    for jk, c in G.items():
        if jk[e] == 0:
            g0[jk[o]] = g0.get(jk[o], 0) + c
        elif jk[e] == 1:
            ge[jk[o]] = ge.get(jk[o], 0) + c
    for jk, c in F.items():
        if jk[e] < 0:
            raise AssertionError("negative power after removing the common factor")
        if jk[e] == 1:
            fe[jk[o]] = fe.get(jk[o], 0) + c
    if any(jk[e] == 0 for jk in F):
        raise AssertionError("mixed coefficient not O(e) after factoring")
    if not any(g0.values()):
        raise DegenerateFieldError(f"exceptional line of chart {chart.name} is entirely singular")

    def as_array(d):
        top = max(d) if d else 0
        return np.array([float(d.get(i, 0)) for i in range(top + 1)])

    g0a = as_array(g0)
    roots = npoly.polyroots(g0a) if len(np.trim_zeros(g0a, "b")) > 1 else np.array([])
    scale = max(1.0, float(np.max(np.abs(roots)))) if roots.size else 1.0
    real = sorted({float(r.real) for r in roots if abs(r.imag) <= 1e-10 * scale})
    dg0 = npoly.polyder(g0a)
    out = []
    for v0 in real:
        v0 = v0 + 0.0 if v0 != 0 else 0.0
        Fe = float(npoly.polyval(v0, as_array(fe)))
        Go = float(npoly.polyval(v0, dg0)) if dg0.size else 0.0
        Ge = float(npoly.polyval(v0, as_array(ge)))
        det = -Fe * Go
        trace = Fe - Go
        mag = max(abs(Fe), abs(Go), abs(Ge), 1.0)
        if abs(det) <= 1e-12 * mag * mag:
            kind = "degenerate"
        elif det < 0:
            kind = "saddle"
        elif trace * trace - 4 * det >= 0:
            kind = "node"
        else:
            kind = "focus"
        out.append(SingularPoint(v0=v0, jacobian_det=det, trace=trace, type=kind))
    return out

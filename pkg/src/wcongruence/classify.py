"""
Non-degeneracy of umbilics and the singularity type of the discriminant.

The discriminant germ is brought to ``g = g02 y**2 / 2 + O(3)`` by an exact
shear and then tested with the usual A_k ladder::

    A2  <=>  g30 != 0
    A3  <=>  T3 = g40 g02 - 3 g21**2 != 0
    A4  <=>  T4 = g50 g02**2 - 10 g31 g21 g02 + 15 g12 g21**2 != 0

A germ in the ideal ``(y**2)`` through the available order is reported as
``A_infinity_to_cap``; the tool never claims more than the data carries.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .congruence import CongruenceGerm, InsufficientOrderError, ridge_invariants
from .jets import NotUmbilicError, is_umbilic
from .series import Series2, s2_subst

log = logging.getLogger(__name__)

__all__ = [
    "NondegeneracyReport",
    "SingularityVerdict",
    "NotSingularError",
    "KINDS",
    "nondegeneracy",
    "align_kernel",
    "classify_discriminant",
    "ridge_limit_witness",
    "RIDGE_ORDERINGS",
    "t_invariants",
]

KINDS = ("A1_plus", "A1_minus", "A2", "A3", "A4", "A_infinity_to_cap", "unresolved")

NUMERIC_RTOL = 1e-9


class NotSingularError(ValueError):
    pass


@dataclass(frozen=True)
class NondegeneracyReport:
    omega: tuple
    jay: tuple

    @property
    def nondegenerate(self) -> bool:
        return any(o != 0 and j != 0 for o, j in zip(self.omega, self.jay))

    def witness_index(self) -> int | None:
        """First ``i`` (1-based) with both determinants nonzero."""
        for i, (o, j) in enumerate(zip(self.omega, self.jay), start=1):
            if o != 0 and j != 0:
                return i
        return None


@dataclass(frozen=True)
class SingularityVerdict:
    kind: str
    witnesses: dict = field(default_factory=dict)
    kernel_direction: tuple | None = None
    cap: int | None = None
    numeric: bool = False
    diagnostic: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown singularity kind {self.kind!r}")

    @property
    def label(self) -> str:
        base = f"A_infinity_to_cap({self.cap})" if self.kind == "A_infinity_to_cap" else self.kind
        return base + (" [numeric]" if self.numeric else "")


def nondegeneracy(germ: CongruenceGerm) -> NondegeneracyReport:
    """The determinants ``Omega_i`` and ``J_i`` of second derivatives at an umbilic."""
    if germ.cap < 2:
        raise InsufficientOrderError("non-degeneracy needs the 2-jet")
    if not is_umbilic(germ):
        raise NotUmbilicError(
            f"origin is not umbilical: p01={germ.p(0, 1)}, q10={germ.q(1, 0)}, p10={germ.p(1, 0)}, q01={germ.q(0, 1)}"
        )
    p20, p11, p02 = germ.p(2, 0), germ.p(1, 1), germ.p(0, 2)
    q20, q11, q02 = germ.q(2, 0), germ.q(1, 1), germ.q(0, 2)

    def det(a, b, c, d):
        return a * d - b * c

    omega = (det(p20, p11, q20, q11), det(p11, p02, q11, q02), det(p20, p02, q20, q02))
    jay = (
        det(p20 - q11, p11 - q02, q20, q11),
        det(p20 - q11, p11 - q02, p11, p02),
        det(p11, p02, q20, q11),
    )
    return NondegeneracyReport(omega, jay)


def align_kernel(g: Series2):
    """Exact linear substitution putting the kernel of a rank-1 Hessian on the x-axis.

    Returns ``(aligned, direction)`` where ``direction`` is the kernel vector in
    the original coordinates.  With ``g02 != 0`` the substitution is
    ``y -> y - (g11/g02) x``; otherwise ``g11 = 0`` and the axes are swapped.
    """
    g20, g11, g02 = g.deriv(2, 0), g.deriv(1, 1), g.deriv(0, 2)
    cap = g.cap
    X, Y = Series2.x(cap), Series2.y(cap)
    if g02 != 0:
        t = -g11 / g02
        if t == 0:
            return g, (Fraction(1), Fraction(0))
        return s2_subst(g, X, Y + t * X), (Fraction(1), t)
    if g11 != 0 or g20 == 0:
        raise ValueError("align_kernel needs a rank-1 Hessian")
    return s2_subst(g, Y, X), (Fraction(0), Fraction(1))


def t_invariants(g: Series2) -> dict:
    """``g30``, ``T3`` and ``T4`` of an aligned germ (entries absent when the cap is short)."""
    out = {"g02": g.deriv(0, 2)}
    if g.cap >= 3:
        out["g30"] = g.deriv(3, 0)
    if g.cap >= 4:
        out["T3"] = g.deriv(4, 0) * g.deriv(0, 2) - 3 * g.deriv(2, 1) ** 2
    if g.cap >= 5:
        g02, g21 = g.deriv(0, 2), g.deriv(2, 1)
        out["T4"] = g.deriv(5, 0) * g02**2 - 10 * g.deriv(3, 1) * g21 * g02 + 15 * g.deriv(1, 2) * g21**2
    return out


def _unit(v) -> tuple:
    n = math.hypot(float(v[0]), float(v[1]))
    return (float(v[0]) / n, float(v[1]) / n)


def classify_discriminant(delta: Series2, cap_for_Ainf: int | None = None, numeric: bool = False) -> SingularityVerdict:
    """Singularity type of ``delta`` at the origin.

    ``cap_for_Ainf`` bounds the order up to which the ``A_infinity`` test looks
    (default: the cap of ``delta``).  With ``numeric=True`` zero tests use a
    relative tolerance of 1e-9 against the largest coefficient and the verdict
    is flagged as numeric.
    """
    if delta.cap < 2:
        raise InsufficientOrderError("classification needs the 2-jet of delta")
    first = {"g00": delta.deriv(0, 0), "g10": delta.deriv(1, 0), "g01": delta.deriv(0, 1)}
    scale = max((abs(float(v)) for _, v in delta.items()), default=0.0) or 1.0

    def zero(v) -> bool:
        if numeric:
            return abs(float(v)) <= NUMERIC_RTOL * scale
        return v == 0

    if not all(zero(v) for v in first.values()):
        raise NotSingularError(f"origin is not a singular point of delta: {first}")
    N = delta.cap if cap_for_Ainf is None else cap_for_Ainf
    if N > delta.cap:
        raise InsufficientOrderError(f"cap_for_Ainf {N} exceeds the cap {delta.cap} of delta")

    g20, g11, g02 = delta.deriv(2, 0), delta.deriv(1, 1), delta.deriv(0, 2)
    hess = g20 * g02 - g11 * g11
    two = {"g20": g20, "g11": g11, "g02": g02, "hessian_det": hess}
    if not zero(hess):
        kind = "A1_plus" if hess > 0 else "A1_minus"
        return SingularityVerdict(kind, two, numeric=numeric)
    if all(zero(v) for v in (g20, g11, g02)):
        return SingularityVerdict("unresolved", two, numeric=numeric, diagnostic="2-jet of delta vanishes (rank 0)")

    g, direction = align_kernel(delta)
    inv = t_invariants(g)
    kernel = _unit(direction)
    witnesses = {"g02": inv["g02"]}
    for name, kind in (("g30", "A2"), ("T3", "A3"), ("T4", "A4")):
        if name not in inv:
            return SingularityVerdict(
                "unresolved", witnesses, kernel, numeric=numeric, diagnostic=f"cap {delta.cap} too small for {name}"
            )
        witnesses[name] = inv[name]
        if not zero(inv[name]):
            return SingularityVerdict(kind, witnesses, kernel, numeric=numeric)

    offending = [f"g{k}0" for k in range(3, N + 1) if not zero(g.deriv(k, 0))]
    offending += [f"g{k}1" for k in range(2, N) if not zero(g.deriv(k, 1))]
    if offending:
        return SingularityVerdict(
            "unresolved",
            witnesses,
            kernel,
            numeric=numeric,
            diagnostic=f"beyond A4 and not in (y^2): nonzero {', '.join(offending)}",
        )
    witnesses["vanishing"] = [f"g{k}0" for k in range(3, N + 1)] + [f"g{k}1" for k in range(2, N)]
    return SingularityVerdict("A_infinity_to_cap", witnesses, kernel, cap=N, numeric=numeric)


RIDGE_ORDERINGS = ("k_ascending", "j_ascending")


def ridge_limit_witness(germ: CongruenceGerm, max_order: int, ordering: str = "k_ascending"):
    """First nonzero ``R_jk(0)`` with ``j + k <= max_order``.

    Derivatives are scanned by total order ``j + k``; within one order
    ``ordering`` is ``"k_ascending"`` (``R_n0`` first) or ``"j_ascending"``
    (``R_0n`` first).  Returns ``(j, k, value)`` or ``None``; orders beyond
    the representable cap of ``R`` are not searched.
    """
    if ordering not in RIDGE_ORDERINGS:
        raise ValueError(f"ordering must be one of {RIDGE_ORDERINGS}")
    if germ.cap < 2:
        return None
    _, _, R = ridge_invariants(germ)
    top = min(max_order, R.cap)
    if top < max_order:
        log.info("ridge search limited to order %d by germ cap %d", top, germ.cap)
    for n in range(top + 1):
        js = range(n, -1, -1) if ordering == "k_ascending" else range(n + 1)
        for j in js:
            v = R.deriv(j, n - j)
            if v != 0:
                return j, n - j, v
    return None

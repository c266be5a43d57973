"""
Jet space of a W-congruence at a non-degenerate umbilic.

After a linear normalization the 2-jet reads ``xi1 = p11 xy + ...`` and
``xi2 = (q20 x**2 + q02 y**2)/2 + ...`` with ``m = -q02/p11``.  Each jet
equation ``W_{n-k,k}(0) = 0`` is affine in exactly one Taylor coefficient of
order ``n + 1``, which it determines:

* ``n - k != m``: the coefficient ``q_{n+1-k,k}``;
* ``n - k == m``, ``k >= 1`` (``m`` a natural number > 1): ``p_{m+2,k-1}``;
* ``(n, k) == (m, 0)``: nothing is determined; ``W_{m0}`` is reported.

For ``m == 1`` the ``q_{2,k}`` are free and the equation with ``n - k == 1``
determines ``q_{0,n+1}`` through the ``q20`` coupling instead.

Equations are solved by probing: the unknown is set to 0 and to 1, which
gives intercept and slope of the affine map.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .congruence import CongruenceGerm, discriminant, w_series
from .series import Series2, s2_subst

log = logging.getLogger(__name__)

__all__ = [
    "UmbilicNormalForm",
    "EquationRecord",
    "JetSolveReport",
    "ExampleClassReport",
    "NotUmbilicError",
    "NormalizationError",
    "SolverError",
    "UnsupportedBranchError",
    "NotApplicableError",
    "ClassViolationError",
    "natural",
    "is_umbilic",
    "normalize_umbilic",
    "apply_linear_change",
    "equation_plan",
    "dependent_slots",
    "expected_slope",
    "solve_jet",
    "check_wm0",
    "w_coefficient",
    "monomial_family",
    "example_class_checks",
]


class NotUmbilicError(ValueError):
    pass


class NormalizationError(ValueError):
    def __init__(self, obstruction: str, detail: str = ""):
        self.obstruction = obstruction
        super().__init__(f"normalization impossible ({obstruction}){': ' + detail if detail else ''}")


class SolverError(ArithmeticError):
    def __init__(self, n: int, k: int, detail: str):
        self.n, self.k = n, k
        super().__init__(f"jet equation W_({n - k},{k}) = 0: {detail}")


class UnsupportedBranchError(NotImplementedError):
    pass


class NotApplicableError(ValueError):
    pass


class ClassViolationError(ValueError):
    pass


def natural(m) -> int | None:
    """``m`` as a positive int when it is a natural number, else ``None``."""
    m = Fraction(m)
    if m.denominator == 1 and m >= 1:
        return int(m)
    return None


@dataclass
class UmbilicNormalForm:
    """Normalized 2-jet plus the free Taylor data of a W-congruence germ.

    ``free_coeffs`` and ``dependent_coeffs`` map ``('p'|'q', j, k)`` to the
    derivative coefficient.  ``linear_change`` is the matrix ``N`` with
    ``(x, y)_old = N (x, y)_new``.
    """

    p11: Fraction
    q02: Fraction
    linear_change: tuple = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    free_coeffs: dict = field(default_factory=dict)
    dependent_coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.p11 = Fraction(self.p11)
        self.q02 = Fraction(self.q02)
        if self.p11 == 0 or self.q02 == 0:
            raise ValueError("normal form needs p11 != 0 and q02 != 0")
        if self.p11 == self.q02:
            raise ValueError("p11 == q02 violates non-degeneracy")
        self.free_coeffs = {key: Fraction(v) for key, v in self.free_coeffs.items()}
        q20 = self.free_coeffs.get(("q", 2, 0), Fraction(0))
        if q20 and self.m != 1:
            raise ValueError("q20 must vanish unless m == 1")

    @property
    def m(self) -> Fraction:
        return -self.q02 / self.p11

    @classmethod
    def from_m(cls, m, p11=1, **kwargs) -> UmbilicNormalForm:
        p11 = Fraction(p11)
        return cls(p11=p11, q02=-Fraction(m) * p11, **kwargs)

    def two_jet(self) -> tuple[dict, dict]:
        p = {(1, 1): self.p11, (2, 0): Fraction(0), (0, 2): Fraction(0)}
        q = {(0, 2): self.q02, (1, 1): Fraction(0), (2, 0): self.free_coeffs.get(("q", 2, 0), Fraction(0))}
        return p, q

    def germ(self, cap: int) -> CongruenceGerm:
        """Germ carrying the 2-jet, the free and the dependent coefficients."""
        p, q = self.two_jet()
        for coeffs in (self.free_coeffs, self.dependent_coeffs):
            for (which, j, k), v in coeffs.items():
                (p if which == "p" else q)[(j, k)] = v
        return CongruenceGerm(Series2.from_derivatives(p, cap), Series2.from_derivatives(q, cap))


@dataclass(frozen=True)
class EquationRecord:
    n: int
    k: int
    slot: tuple | None  # ('p'|'q', j, k) determined, None for the W_{m0} slot
    value: Fraction | None
    slope: Fraction | None
    intercept: Fraction | None

    @property
    def derivative(self):
        return (self.n - self.k, self.k)


@dataclass
class JetSolveReport:
    order_reached: int
    equations_used: list
    wm0_residual: Fraction | None = None
    extra_free_slots: list = field(default_factory=list)

    def determined(self) -> dict:
        return {r.slot: r.value for r in self.equations_used if r.slot is not None and r.value is not None}


# --- normalization ------------------------------------------------------


def is_umbilic(germ: CongruenceGerm) -> bool:
    p, q = germ.p, germ.q
    return germ.cap >= 1 and p(0, 1) == 0 and q(1, 0) == 0 and p(1, 0) == q(0, 1)


def apply_linear_change(germ: CongruenceGerm, N) -> CongruenceGerm:
    """``xi_new(X) = N^-1 xi(N X)``: a linear change of plane coordinates with ``xi``
    transported as a vector field.  ``W`` is invariant under it."""
    (a, b), (c, d) = [[Fraction(v) for v in row] for row in N]
    det = a * d - b * c
    if det == 0:
        raise ValueError("linear change is singular")
    cap = germ.cap
    X, Y = Series2.x(cap), Series2.y(cap)
    px, py = a * X + b * Y, c * X + d * Y
    f1 = s2_subst(germ.xi1, px, py)
    f2 = s2_subst(germ.xi2, px, py)
    return CongruenceGerm((d * f1 - b * f2) / det, (-c * f1 + a * f2) / det)


def _rational_roots(coeffs) -> list[Fraction]:
    """Rational roots of ``sum coeffs[i] t**i`` (lowest degree first)."""
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if len(coeffs) <= 1:
        return []
    import sympy

    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], t, domain="QQ")
    return sorted(Fraction(int(r.p), int(r.q)) for r in poly.ground_roots())


def _binary_roots(form) -> list[tuple]:
    """Rational projective roots of a binary form ``form(nx, ny)`` given as coefficient list
    ``[c_0, ..., c_d]`` of ``nx**i * ny**(d-i)``; axes first."""
    d = len(form) - 1
    out = []
    if all(c == 0 for c in form):
        return [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
    # (0, 1) is a root iff c_0 == 0, (1, 0) iff c_d == 0
    if form[0] == 0:
        out.append((Fraction(0), Fraction(1)))
    if form[d] == 0:
        out.append((Fraction(1), Fraction(0)))
    for t in _rational_roots(list(form)):
        if t != 0:
            out.append((t, Fraction(1)))
    return out


def _quad(Qc, n):
    # Qc = (c20, c11, c02) monomial coefficients of a quadratic form
    return Qc[0] * n[0] ** 2 + Qc[1] * n[0] * n[1] + Qc[2] * n[1] ** 2


def _polar(Qc, u, v):
    return Qc[0] * u[0] * v[0] + Qc[1] * (u[0] * v[1] + u[1] * v[0]) / 2 + Qc[2] * u[1] * v[1]


def _form_type(Qc) -> str:
    disc = Qc[1] ** 2 - 4 * Qc[0] * Qc[2]
    if disc > 0:
        return "indefinite"
    if disc < 0:
        return "definite"
    return "zero" if not any(Qc) else "degenerate"


def normalize_umbilic(germ: CongruenceGerm):
    """Bring an umbilic germ to ``p02 = p20 = q11 = 0``, ``p11, q02 != 0``.

    Searches for rational directions ``n1, n2`` (the new axes) with
    ``Q(n1) || n2``, ``Q(n2) || n2`` and ``B(n1, n2) || n1``, where ``Q`` is the
    vector quadratic part of ``xi`` and ``B`` its polar form.  These are exactly
    the normal-form conditions after ``xi -> N^-1 xi(N .)`` with ``N = [n1 n2]``.

    Returns ``(normalized_germ, UmbilicNormalForm)``.
    """
    if germ.cap < 2:
        raise NormalizationError("insufficient-order", f"cap {germ.cap} < 2")
    if not is_umbilic(germ):
        raise NotUmbilicError(
            f"origin is not umbilical: p01={germ.p(0, 1)}, q10={germ.q(1, 0)}, p10={germ.p(1, 0)}, q01={germ.q(0, 1)}"
        )
    Q1 = (germ.xi1.coeff(2, 0), germ.xi1.coeff(1, 1), germ.xi1.coeff(0, 2))
    Q2 = (germ.xi2.coeff(2, 0), germ.xi2.coeff(1, 1), germ.xi2.coeff(0, 2))
    kinds = (_form_type(Q1), _form_type(Q2))
    if "indefinite" not in kinds:
        if kinds == ("definite", "definite"):
            raise NormalizationError("both-definite", "both quadratic forms of the 2-jet are definite")
        raise NormalizationError("no-indefinite-form", f"quadratic forms are {kinds[0]} and {kinds[1]}")

    def Q(n):
        return (_quad(Q1, n), _quad(Q2, n))

    def B(u, v):
        return (_polar(Q1, u, v), _polar(Q2, u, v))

    def cross(u, v):
        return u[0] * v[1] - u[1] * v[0]

    # cross(n, Q(n)) as a binary cubic in (nx, ny), coefficient of nx**i ny**(3-i)
    cubic = [
        -Q1[2],
        Q2[2] - Q1[1],
        Q2[1] - Q1[0],
        Q2[0],
    ]
    tried = []
    for n2 in _binary_roots(cubic):
        # phi(v) = cross(n2, v) annihilates n2; need phi(Q(n1)) == 0
        quad = [
            n2[0] * Q2[2] - n2[1] * Q1[2],
            n2[0] * Q2[1] - n2[1] * Q1[1],
            n2[0] * Q2[0] - n2[1] * Q1[0],
        ]
        for n1 in _binary_roots(quad):
            if cross(n1, n2) == 0:
                continue
            tried.append((n1, n2))
            if cross(n1, B(n1, n2)) != 0:
                continue
            N = ((n1[0], n2[0]), (n1[1], n2[1]))
            new = apply_linear_change(germ, N)
            p, q = new.p, new.q
            if p(0, 2) == 0 and p(2, 0) == 0 and q(1, 1) == 0 and p(1, 1) != 0 and q(0, 2) != 0:
                m = -q(0, 2) / p(1, 1)
                if p(1, 1) == q(0, 2):
                    raise NormalizationError("p11-equals-q02", "degenerate umbilic")
                if m != 1 and q(2, 0) != 0:
                    raise NormalizationError(
                        "W10-violated", f"q20={q(2, 0)} with m={m}; the 2-jet is not that of a W-congruence"
                    )
                free = {("q", 2, 0): q(2, 0)} if m == 1 else {}
                nf = UmbilicNormalForm(p11=p(1, 1), q02=q(0, 2), linear_change=N, free_coeffs=free)
                return new, nf
    raise NormalizationError(
        "irrational-directions",
        "no rational pair of axes reaches the normal form; rotate numerically first",
    )


# --- jet equations -----------------------------------------------------


def w_coefficient(germ: CongruenceGerm, j: int, k: int) -> Fraction:
    """``W_{jk}(0)``, read from a copy of the germ padded to the order it needs.

    At an umbilic the Taylor coefficients of order ``j + k + 2`` only meet
    first derivatives that vanish at the origin, so zero padding above the
    stored cap is harmless there.
    """
    n = j + k
    return w_series(germ.with_cap(n + 3)).deriv(j, k)


def equation_plan(m, n: int) -> list[tuple[int, tuple | None]]:
    """Ordered ``(k, unknown_slot)`` pairs for the order-``n`` jet equations."""
    mn = natural(m)
    plan = []
    if mn == 1:
        for k in range(n, -1, -1):
            if n - k == 1:
                plan.append((k, None if k == 0 else ("q", 0, n + 1)))
            else:
                plan.append((k, ("q", n + 1 - k, k)))
        return plan
    for k in range(n + 1):
        if mn is not None and n - k == mn:
            plan.append((k, None if k == 0 else ("p", mn + 2, k - 1)))
        else:
            plan.append((k, ("q", n + 1 - k, k)))
    return plan


def dependent_slots(m, target_order: int) -> set:
    return {slot for n in range(1, target_order + 1) for _, slot in equation_plan(m, n) if slot is not None}


def expected_slope(normal: UmbilicNormalForm, n: int, k: int, slot) -> Fraction | None:
    """Slope predicted for a ``q``-unknown when ``q20 == 0``: ``-2 p11**2 (m - (n - k))``."""
    if slot is None or slot[0] != "q" or normal.m == 1:
        return None
    return -2 * normal.p11**2 * (normal.m - (n - k))


def solve_jet(normal: UmbilicNormalForm, target_order: int):
    """Fill the dependent coefficients so that ``W_{n-k,k}(0) = 0`` for ``n <= target_order``.

    Returns ``(germ, report)``; the germ has cap ``target_order + 1``.
    ``normal.dependent_coeffs`` is updated in place.
    """
    m = normal.m
    mn = natural(m)
    if target_order < 1:
        raise ValueError("target_order must be >= 1")
    if mn == 1 and target_order >= 2 and normal.free_coeffs.get(("q", 2, 0), 0) == 0:
        raise UnsupportedBranchError("m = 1 with q20 = 0: the q_{0,n+1} recursion has zero slope")
    dep = dependent_slots(m, target_order)
    clash = sorted(k for k in normal.free_coeffs if k in dep)
    if clash:
        raise ValueError(f"free coefficients supplied for dependent slots: {clash}")

    cap = target_order + 1
    normal.dependent_coeffs = {}
    germ = normal.germ(cap)
    records = []
    extra_free = []
    for n in range(1, target_order + 1):
        for k, slot in equation_plan(m, n):
            if slot is None:
                records.append(EquationRecord(n, k, None, None, None, None))
                continue
            which, sj, sk = slot
            g0 = germ.replace(which, sj, sk, 0)
            g1 = germ.replace(which, sj, sk, 1)
            intercept = w_coefficient(g0, n - k, k)
            slope = w_coefficient(g1, n - k, k) - intercept
            if slope == 0:
                if intercept != 0:
                    raise SolverError(n, k, f"zero slope in {which}{sj}{sk} with nonzero intercept {intercept}")
                extra_free.append(slot)
                germ = g0
                records.append(EquationRecord(n, k, slot, None, slope, intercept))
                log.info("slot %s left free by W_(%d,%d)", slot, n - k, k)
                continue
            value = -intercept / slope
            germ = germ.replace(which, sj, sk, value)
            normal.dependent_coeffs[slot] = value
            records.append(EquationRecord(n, k, slot, value, slope, intercept))
            exp = expected_slope(normal, n, k, slot)
            if exp is not None and exp != slope:
                log.warning("W_(%d,%d): slope %s differs from -2 p11^2 (m-(n-k)) = %s", n - k, k, slope, exp)
            else:
                log.debug("W_(%d,%d): %s%d%d = %s (slope %s)", n - k, k, which, sj, sk, value, slope)
    report = JetSolveReport(order_reached=target_order, equations_used=records, extra_free_slots=extra_free)
    if mn is not None and mn <= target_order:
        report.wm0_residual = w_coefficient(germ, mn, 0)
    return germ, report


def check_wm0(normal: UmbilicNormalForm, germ: CongruenceGerm) -> Fraction:
    """Exact ``W_{m0}(0)``; the conjecture predicts 0 whenever ``m`` is natural."""
    mn = natural(normal.m)
    if mn is None:
        raise NotApplicableError(f"m = {normal.m} is not a natural number")
    if germ.cap < mn + 1:
        raise ValueError(f"germ cap {germ.cap} cannot carry W_({mn},0); need >= {mn + 1}")
    return w_coefficient(germ, mn, 0)


# --- example class ------------------------------------------------------


def monomial_family(m, C, cap: int) -> CongruenceGerm:
    """``xi1 = xy``, ``xi2 = -(m/2) y**2 + C x**(m+1)`` (the last term only for natural m)."""
    m = Fraction(m)
    C = Fraction(C)
    mn = natural(m)
    if mn is None and C != 0:
        raise ValueError(f"m = {m} is not natural, so C must be 0")
    if mn is not None and cap < mn + 1:
        raise ValueError(f"cap {cap} < m + 1 = {mn + 1}")
    if cap < 2:
        raise ValueError("cap must be >= 2")
    xi1 = Series2.from_monomials({(1, 1): 1}, cap)
    terms = {(0, 2): -m / 2}
    if mn is not None:
        terms[(mn + 1, 0)] = C
    return CongruenceGerm(xi1, Series2.from_monomials(terms, cap))


@dataclass(frozen=True)
class ExampleClassReport:
    n: int
    wn0: Fraction
    wn0_predicted: Fraction
    wn1: Fraction | None
    wn1_predicted: Fraction | None
    delta_n1_0: Fraction
    delta_n1_0_predicted: Fraction
    delta_n_1: Fraction
    delta_n_1_predicted: Fraction

    @property
    def residuals(self) -> dict:
        return {
            "W_n0": self.wn0 - self.wn0_predicted,
            "W_n-1,1": None if self.wn1 is None else self.wn1 - self.wn1_predicted,
            "delta_n+1,0": self.delta_n1_0 - self.delta_n1_0_predicted,
            "delta_n,1": self.delta_n_1 - self.delta_n_1_predicted,
        }

    def all_zero(self) -> bool:
        return all(r == 0 for r in self.residuals.values() if r is not None)


def example_class_checks(germ: CongruenceGerm, normal: UmbilicNormalForm, n: int) -> ExampleClassReport:
    """Evaluate both sides of the four order-``n`` identities of the ``p_{j0} = 0`` class.

    The identity for ``W_{n-1,1}`` presupposes ``q_{n+1,0} = 0`` and is
    reported as ``None`` otherwise.
    """
    p, q = germ.p, germ.q
    offending = [j for j in range(germ.cap + 1) if p(j, 0) != 0]
    if offending:
        raise ClassViolationError(f"p_(j,0) must vanish; nonzero for j = {offending}")
    if n < 2:
        raise ValueError("n must be >= 2")
    if germ.cap < n + 3:
        raise ValueError(f"germ cap {germ.cap} < n + 3 = {n + 3}")
    p11, q02, m = normal.p11, normal.q02, normal.m
    if p(1, 1) != p11 or q(0, 2) != q02:
        raise ValueError("germ 2-jet disagrees with the normal form")
    broken = [f"p{jk[0]}{jk[1]}" for jk in ((0, 1), (0, 2)) if p(*jk) != 0]
    broken += [f"q{j}0" for j in range(n + 1) if q(j, 0) != 0]
    broken += [f"q{j}1" for j in range(n) if q(j, 1) != 0]
    if broken:
        raise ClassViolationError(f"induction hypotheses fail at order {n}: nonzero {', '.join(broken)}")

    W = w_series(germ)
    delta = discriminant(germ)
    qn1_0 = q(n + 1, 0)
    qn_1 = q(n, 1)
    wn1 = wn1_pred = None
    if qn1_0 == 0:
        wn1 = W.deriv(n - 1, 1)
        wn1_pred = 2 * p11 * (q02 + (n - 1) * p11) * qn_1
    return ExampleClassReport(
        n=n,
        wn0=W.deriv(n, 0),
        wn0_predicted=2 * p11 * (q02 + n * p11) * qn1_0,
        wn1=wn1,
        wn1_predicted=wn1_pred,
        delta_n1_0=delta.deriv(n + 1, 0),
        delta_n1_0_predicted=4 * (n + 1) * p11 * qn1_0,
        delta_n_1=delta.deriv(n, 1),
        delta_n_1_predicted=2 * (2 * n - m - 1) * p11 * qn_1,
    )

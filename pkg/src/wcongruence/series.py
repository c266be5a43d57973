"""
Truncated bivariate power series with exact rational coefficients.

A :class:`Series2` of cap ``N`` holds every monomial coefficient ``c[j][k]``
of ``x**j * y**k`` with ``j + k <= N``.  Terms of total degree above the cap
are *unknown*, not zero, so every operation truncates its result to the
degree that the inputs actually determine.

Storage is in monomial form.  Taylor data in the derivative convention
(``g_jk = d^(j+k) g / dx^j dy^k`` at the origin) goes through
:meth:`Series2.from_derivatives` and :meth:`Series2.deriv`, which apply the
``j! k!`` scaling exactly.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from numbers import Rational

import numpy as np

__all__ = [
    "Series2",
    "SeriesError",
    "CapMismatchError",
    "UnitDivisionError",
    "SubstitutionError",
    "UnsupportedMapError",
    "s2_mul",
    "s2_diff",
    "s2_div",
    "s2_subst",
    "s2_invert_map",
]


class SeriesError(ValueError):
    """Base class for structural errors in series arithmetic."""


class CapMismatchError(SeriesError):
    pass


class UnitDivisionError(SeriesError, ZeroDivisionError):
    pass


class SubstitutionError(SeriesError):
    pass


class UnsupportedMapError(SeriesError):
    pass


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


class Series2:
    """Immutable truncated series in ``x, y`` over the rationals."""

    __slots__ = ("_cap", "_rows", "_hash")

    def __init__(self, cap: int, rows=None):
        if cap < 0:
            raise SeriesError(f"cap must be non-negative, got {cap}")
        self._cap = cap
        if rows is None:
            self._rows = tuple((Fraction(0),) * (cap - j + 1) for j in range(cap + 1))
        else:
            rows = tuple(tuple(_as_fraction(v) for v in row) for row in rows)
            if len(rows) != cap + 1 or any(len(r) != cap - j + 1 for j, r in enumerate(rows)):
                raise SeriesError("coefficient table is not triangular for the given cap")
            self._rows = rows
        self._hash = None

    # construction ---------------------------------------------------------

    @classmethod
    def _raw(cls, cap, rows):
        # rows already hold Fractions with the right shape
        obj = cls.__new__(cls)
        obj._cap = cap
        obj._rows = rows
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, cap: int) -> Series2:
        return cls(cap)

    @classmethod
    def const(cls, value, cap: int) -> Series2:
        return cls.from_monomials({(0, 0): value}, cap)

    @classmethod
    def x(cls, cap: int) -> Series2:
        return cls.from_monomials({(1, 0): 1}, cap)

    @classmethod
    def y(cls, cap: int) -> Series2:
        return cls.from_monomials({(0, 1): 1}, cap)

    @classmethod
    def from_monomials(cls, coeffs: dict, cap: int) -> Series2:
        """Build from ``{(j, k): c}`` meaning ``sum c * x**j * y**k``.

        Entries beyond the cap are dropped (they are truncated away).
        """
        table = [[Fraction(0)] * (cap - j + 1) for j in range(cap + 1)]
        for (j, k), value in coeffs.items():
            if j < 0 or k < 0:
                raise SeriesError(f"negative exponent in ({j}, {k})")
            if j + k <= cap:
                table[j][k] += _as_fraction(value)
        return cls._raw(cap, tuple(tuple(r) for r in table))

    @classmethod
    def from_derivatives(cls, derivs: dict, cap: int) -> Series2:
        """Build from Taylor data ``{(j, k): g_jk}`` with ``g_jk`` the derivative value."""
        return cls.from_monomials(
            {jk: _as_fraction(v) / (factorial(jk[0]) * factorial(jk[1])) for jk, v in derivs.items()},
            cap,
        )

    # access ---------------------------------------------------------------

    @property
    def cap(self) -> int:
        return self._cap

    @property
    def rows(self):
        return self._rows

    def coeff(self, j: int, k: int) -> Fraction:
        """Monomial coefficient of ``x**j y**k``."""
        if j < 0 or k < 0 or j + k > self._cap:
            raise IndexError(f"({j}, {k}) outside cap {self._cap}")
        return self._rows[j][k]

    def deriv(self, j: int, k: int) -> Fraction:
        """Derivative value ``d^(j+k)/dx^j dy^k`` at the origin."""
        return self.coeff(j, k) * factorial(j) * factorial(k)

    def __getitem__(self, jk) -> Fraction:
        return self.coeff(*jk)

    def items(self):
        """Yield ``((j, k), c)`` for the nonzero monomial coefficients."""
        for j, row in enumerate(self._rows):
            for k, c in enumerate(row):
                if c:
                    yield (j, k), c

    def monomials(self) -> dict:
        return dict(self.items())

    def derivatives(self) -> dict:
        return {(j, k): c * factorial(j) * factorial(k) for (j, k), c in self.items()}

    def is_zero(self) -> bool:
        return not any(c for row in self._rows for c in row)

    def valuation(self):
        """Lowest total degree carrying a nonzero coefficient, or ``None``."""
        for n in range(self._cap + 1):
            if any(self._rows[n - k][k] for k in range(n + 1)):
                return n
        return None

    def homogeneous(self, n: int) -> dict:
        return {(n - k, k): self._rows[n - k][k] for k in range(n + 1)}

    # cap handling ---------------------------------------------------------

    def truncate(self, cap: int) -> Series2:
        if cap > self._cap:
            raise CapMismatchError(f"cannot raise cap {self._cap} to {cap} by truncation")
        if cap == self._cap:
            return self
        return Series2._raw(cap, tuple(self._rows[j][: cap - j + 1] for j in range(cap + 1)))

    def pad(self, cap: int) -> Series2:
        """Re-read the series as a polynomial and extend it by zeros up to ``cap``.

        Only meaningful when the caller knows the dropped terms vanish, e.g. for
        an explicitly polynomial germ.
        """
        if cap <= self._cap:
            return self.truncate(cap)
        zero = Fraction(0)
        rows = [self._rows[j] + (zero,) * (cap - self._cap) for j in range(self._cap + 1)]
        rows += [(zero,) * (cap - j + 1) for j in range(self._cap + 1, cap + 1)]
        return Series2._raw(cap, tuple(rows))

    def with_cap(self, cap: int) -> Series2:
        return self.pad(cap) if cap > self._cap else self.truncate(cap)

    # arithmetic -----------------------------------------------------------

    def _check(self, other: Series2):
        if self._cap != other._cap:
            raise CapMismatchError(f"cap mismatch: {self._cap} vs {other._cap}")

    def __add__(self, other):
        if isinstance(other, Series2):
            self._check(other)
            return Series2._raw(
                self._cap,
                tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self._rows, other._rows)),
            )
        return self + Series2.const(other, self._cap)

    __radd__ = __add__

    def __neg__(self):
        return Series2._raw(self._cap, tuple(tuple(-a for a in r) for r in self._rows))

    def __sub__(self, other):
        if isinstance(other, Series2):
            return self + (-other)
        return self + (-_as_fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Series2):
            return s2_mul(self, other)
        f = _as_fraction(other)
        return Series2._raw(self._cap, tuple(tuple(a * f for a in r) for r in self._rows))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Series2):
            return s2_div(self, other)
        f = _as_fraction(other)
        if f == 0:
            raise ZeroDivisionError("division of a series by zero")
        return self * (1 / f)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Series2.const(1, self._cap)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Series2):
            return NotImplemented
        return self._cap == other._cap and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._cap, self._rows))
        return self._hash

    # evaluation -----------------------------------------------------------

    def __call__(self, x, y):
        """Evaluate the truncated polynomial at a point (exact for exact input)."""
        total = 0
        for j in range(self._cap, -1, -1):
            row = self._rows[j]
            inner = 0
            for k in range(len(row) - 1, -1, -1):
                inner = inner * y + row[k]
            total = total * x + inner
        return total

    def to_array(self) -> np.ndarray:
        """Square float array ``a[j, k]`` for :func:`numpy.polynomial.polynomial.polyval2d`."""
        a = np.zeros((self._cap + 1, self._cap + 1))
        for (j, k), c in self.items():
            a[j, k] = float(c)
        return a

    def __repr__(self):
        return f"Series2(cap={self._cap}, {self.format()})"

    def format(self, var=("x", "y")) -> str:
        terms = []
        for (j, k), c in sorted(self.items(), key=lambda t: (t[0][0] + t[0][1], -t[0][0])):
            mono = "*".join(
                p for p in (
                    f"{var[0]}^{j}" if j > 1 else (var[0] if j == 1 else ""),
                    f"{var[1]}^{k}" if k > 1 else (var[1] if k == 1 else ""),
                ) if p
            )
            terms.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(terms) if terms else "0"


def s2_mul(f: Series2, g: Series2) -> Series2:
    """Product truncated to the common cap."""
    f._check(g)
    cap = f.cap
    out = [[Fraction(0)] * (cap - j + 1) for j in range(cap + 1)]
    g_items = list(g.items())
    for (j1, k1), c1 in f.items():
        room = cap - j1 - k1
        if room < 0:
            continue
        for (j2, k2), c2 in g_items:
            if j2 + k2 <= room:
                out[j1 + j2][k1 + k2] += c1 * c2
    return Series2._raw(cap, tuple(tuple(r) for r in out))


def s2_diff(f: Series2, jx: int, ky: int) -> Series2:
    """Partial derivative ``d^(jx+ky) f / dx^jx dy^ky``; the cap drops by ``jx+ky`` (floor 0)."""
    if jx < 0 or ky < 0:
        raise ValueError("derivative orders must be non-negative")
    order = jx + ky
    cap = max(f.cap - order, 0)
    out = [[Fraction(0)] * (cap - j + 1) for j in range(cap + 1)]
    for (j, k), c in f.items():
        if j < jx or k < ky:
            continue
        nj, nk = j - jx, k - ky
        if nj + nk > cap:
            continue
        out[nj][nk] = c * (factorial(j) // factorial(nj)) * (factorial(k) // factorial(nk))
    return Series2._raw(cap, tuple(tuple(r) for r in out))


def s2_div(f: Series2, g: Series2) -> Series2:
    """Quotient ``q`` with ``q * g == f`` through the cap; ``g`` must be a unit."""
    f._check(g)
    g0 = g.coeff(0, 0)
    if g0 == 0:
        raise UnitDivisionError("divisor has zero constant term")
    cap = f.cap
    q = [[Fraction(0)] * (cap - j + 1) for j in range(cap + 1)]
    g_items = [(jk, c) for jk, c in g.items() if jk != (0, 0)]
    # degree by degree: q_n = (f_n - sum_{i>=1} g_i q_{n-i}) / g0
    for n in range(cap + 1):
        for j in range(n, -1, -1):
            k = n - j
            acc = f.coeff(j, k)
            for (gj, gk), gc in g_items:
                if gj <= j and gk <= k:
                    acc -= gc * q[j - gj][k - gk]
            q[j][k] = acc / g0
    return Series2._raw(cap, tuple(tuple(r) for r in q))


def s2_subst(f: Series2, px: Series2, py: Series2) -> Series2:
    """Composition ``f(px(u, v), py(u, v))`` truncated at ``f.cap``.

    ``px`` and ``py`` must vanish at the origin and carry at least ``f.cap``
    orders; they are read at ``f.cap``.
    """
    for name, p in (("px", px), ("py", py)):
        if p.coeff(0, 0) != 0:
            raise SubstitutionError(f"{name} has nonzero constant term {p.coeff(0, 0)}")
        if p.cap < f.cap:
            raise CapMismatchError(f"{name} has cap {p.cap} below the cap {f.cap} of the outer series")
    cap = f.cap
    px = px.truncate(cap)
    py = py.truncate(cap)
    xpow = [Series2.const(1, cap)]
    for _ in range(cap):
        xpow.append(xpow[-1] * px)
    result = Series2.zero(cap)
    for j in range(cap, -1, -1):
        row = f.rows[j]
        if not any(row):
            continue
        # Horner in y along the row
        inner = Series2.const(row[-1], cap)
        for k in range(len(row) - 2, -1, -1):
            inner = inner * py + row[k]
        result = result + xpow[j] * inner
    return result


def s2_invert_map(Fx: Series2, Fy: Series2):
    """Compositional inverse of a plane map tangent to the identity.

    Returns ``(Gx, Gy)`` with ``F o G = id`` through the cap.  Each
    fixed-point sweep ``G <- id - (F - id) o G`` gains one order.
    """
    Fx._check(Fy)
    cap = Fx.cap
    for name, p in (("Fx", Fx), ("Fy", Fy)):
        if p.coeff(0, 0) != 0:
            raise SubstitutionError(f"{name} has nonzero constant term")
    if cap >= 1:
        lin = (Fx.coeff(1, 0), Fx.coeff(0, 1), Fy.coeff(1, 0), Fy.coeff(0, 1))
        if lin != (1, 0, 0, 1):
            raise UnsupportedMapError(
                f"linear part {lin} is not the identity; compose with the explicit linear inverse first"
            )
    X, Y = Series2.x(cap), Series2.y(cap)
    nx, ny = Fx - X, Fy - Y
    Gx, Gy = X, Y
    for _ in range(cap):
        Gx, Gy = X - s2_subst(nx, Gx, Gy), Y - s2_subst(ny, Gx, Gy)
    return Gx, Gy

"""Exact and validated scalar arithmetic.

Rationals are plain :class:`fractions.Fraction` (Python integers are the
integral ones). :class:`ExactComplex` pairs two rationals when a test vector
has complex rational entries, and :class:`Bracket` is a closed float interval
that is guaranteed to contain the quantity it certifies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

__all__ = [
    "ExactComplex",
    "Bracket",
    "binomial",
    "generalized_binomial",
    "bernoulli",
    "telescoping_tail",
    "quadratic_tail",
    "is_exact",
]

EPS = 2.0**-53


@dataclass(frozen=True)
class ExactComplex:
    """Complex number with rational real and imaginary parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def _lift(other):
        if isinstance(other, ExactComplex):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactComplex(Fraction(other))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ExactComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ExactComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("ExactComplex division by zero")
        num = self * o.conjugate()
        return ExactComplex(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        return ExactComplex._lift(other) / self

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> ExactComplex:
        return ExactComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ExactComplex({self.re}, {self.im})"


ExactScalar = Union[int, Fraction, ExactComplex]


def is_exact(x) -> bool:
    """True for ints, Fractions and ExactComplex (but not bool-like floats)."""
    return isinstance(x, (Rational, ExactComplex)) and not isinstance(x, bool)


def _down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


def _floor_float(q: Fraction) -> float:
    f = float(q)
    return f if Fraction(f) <= q else _down(f)


def _ceil_float(q: Fraction) -> float:
    f = float(q)
    return f if Fraction(f) >= q else _up(f)


@dataclass(frozen=True)
class Bracket:
    """Closed interval ``[lo, hi]`` of doubles enclosing a real quantity.

    ``exact`` carries the rational value when it is known; the float
    endpoints are then its outward roundings (equal when representable).
    """

    lo: float
    hi: float
    exact: Fraction | None = None

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty bracket [{self.lo}, {self.hi}]")

    @classmethod
    def from_fraction(cls, q) -> Bracket:
        q = Fraction(q)
        return cls(_floor_float(q), _ceil_float(q), exact=q)

    @classmethod
    def from_fractions(cls, lo, hi) -> Bracket:
        return cls(_floor_float(Fraction(lo)), _ceil_float(Fraction(hi)))

    @classmethod
    def around(cls, value: float, radius: float) -> Bracket:
        """Bracket ``value ± radius`` with outward rounding."""
        return cls(_down(value - radius), _up(value + radius))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x) -> bool:
        if isinstance(x, Fraction):
            return Fraction(self.lo) <= x <= Fraction(self.hi)
        return self.lo <= x <= self.hi

    def _exact_or_none(self, other, op):
        if self.exact is not None and other.exact is not None:
            return Bracket.from_fraction(op(self.exact, other.exact))
        return None

    def __add__(self, other):
        if not isinstance(other, Bracket):
            other = Bracket.from_fraction(other) if is_exact(other) else Bracket(other, other)
        ex = self._exact_or_none(other, lambda a, b: a + b)
        return ex or Bracket(_down(self.lo + other.lo), _up(self.hi + other.hi))

    __radd__ = __add__

    def __neg__(self):
        return Bracket(-self.hi, -self.lo, None if self.exact is None else -self.exact)

    def __sub__(self, other):
        if not isinstance(other, Bracket):
            other = Bracket.from_fraction(other) if is_exact(other) else Bracket(other, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Bracket):
            other = Bracket.from_fraction(other) if is_exact(other) else Bracket(other, other)
        ex = self._exact_or_none(other, lambda a, b: a * b)
        if ex is not None:
            return ex
        prods = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return Bracket(_down(min(prods)), _up(max(prods)))

    __rmul__ = __mul__


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k); zero outside ``0 <= k <= n``."""
    if n < 0:
        raise ValueError("binomial requires n >= 0")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def generalized_binomial(alpha, k: int):
    """alpha (alpha-1) ... (alpha-k+1) / k!.

    Exact when ``alpha`` is rational, float/complex otherwise.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    exact = is_exact(alpha)
    out = Fraction(1) if exact else 1.0
    for j in range(k):
        out = out * (alpha - j) / (j + 1)
    if exact and isinstance(out, Fraction) and out.denominator == 1:
        return int(out)
    return out


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # Akiyama-Tanigawa; yields the B_1 = +1/2 convention directly.
    out = []
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return tuple(out)


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = +1/2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _bernoulli_table(max(n, 32))[n]


def telescoping_tail(K: int) -> Fraction:
    """Exact value of sum_{k>=K} 1/((k+1)(k+2)) = 1/(K+1)."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    return Fraction(1, K + 1)


@lru_cache(maxsize=4096)
def quadratic_tail(K: int, terms: int = 10_000) -> Bracket:
    """Enclosure of sum_{k>=K} 1/(k+1)^2.

    ``terms`` explicit summands are added in floating point with a rigorous
    rounding allowance; the remainder sum_{j>=n} 1/j^2 is enclosed by
    [1/n, 1/(n - 1/2)] (integral comparison and midpoint convexity).
    """
    if K < 1:
        raise ValueError("quadratic_tail requires K >= 1")
    if terms < 0:
        raise ValueError("terms must be nonnegative")
    n = K + 1 + terms
    rem_lo, rem_hi = Fraction(1, n), Fraction(2, 2 * n - 1)
    if terms == 0:
        return Bracket.from_fractions(rem_lo, rem_hi)
    # each summand carries one rounding (the square is an exact integer)
    head = math.fsum(1.0 / (j * j) for j in range(K + 1, n))
    err = 2 * EPS * head + math.ulp(head)
    lo = _down(_down(head - err) + _floor_float(rem_lo))
    hi = _up(_up(head + err) + _ceil_float(rem_hi))
    return Bracket(lo, hi)

"""Finitely supported coefficient sequences.

A sequence is any 1-D sequence of numbers, read as an l^2 vector and as the
Taylor coefficients of a polynomial. Lists of ints/Fractions/ExactComplex
take the exact path (results are lists); anything else is converted to a
complex or float numpy array.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import accumulate

import numpy as np

from .numerics import EPS, Bracket, ExactComplex, binomial, is_exact, quadratic_tail

__all__ = [
    "as_exact",
    "partial_sums",
    "apply_cesaro",
    "apply_cesaro_adjoint",
    "eigenvector_bm",
    "unit_vector",
    "lp_norm",
    "inner",
    "hyponormal_form",
]


def as_exact(a) -> bool:
    """Whether ``a`` should be processed in exact arithmetic."""
    if isinstance(a, np.ndarray):
        return a.dtype == object and all(is_exact(x) for x in a)
    return len(a) > 0 and all(is_exact(x) for x in a)


def _array(a) -> np.ndarray:
    arr = np.asarray(a)
    if np.iscomplexobj(arr):
        return arr.astype(complex)
    return arr.astype(float)


def _pad(a, length):
    if length is None or length <= len(a):
        return a
    if isinstance(a, list):
        return a + [0] * (length - len(a))
    return np.concatenate([a, np.zeros(length - len(a), dtype=a.dtype)])


def unit_vector(n: int, length: int | None = None) -> list[int]:
    """Exact e_n (0-based), padded to ``length``."""
    length = n + 1 if length is None else length
    return [1 if k == n else 0 for k in range(length)]


def partial_sums(a):
    if as_exact(a):
        return list(accumulate(a))
    return np.cumsum(_array(a))


def apply_cesaro(a, length: int | None = None):
    """(Ca)_n = (a_0 + ... + a_n)/(n+1), for n < max(len(a), length)."""
    if as_exact(a):
        s = partial_sums(_pad(list(a), length))
        return [x / (n + 1) if isinstance(x, ExactComplex) else Fraction(x, n + 1)
                for n, x in enumerate(s)]
    arr = _pad(_array(a), length)
    return np.cumsum(arr) / np.arange(1, len(arr) + 1)


def apply_cesaro_adjoint(a):
    """(C*a)_n = sum_{j>=n} a_j/(j+1); exact for finitely supported ``a``."""
    if as_exact(a):
        terms = [x / (j + 1) if isinstance(x, ExactComplex) else Fraction(x, j + 1)
                 for j, x in enumerate(a)]
        return list(accumulate(reversed(terms)))[::-1]
    arr = _array(a) / np.arange(1, len(a) + 1)
    return np.cumsum(arr[::-1])[::-1]


def eigenvector_bm(m: int, N: int) -> list[int]:
    """Entries C(k, m) for k < N: the eigenvector of C for 1/(m+1)."""
    if N <= m:
        raise ValueError("eigenvector_bm requires N > m")
    return [binomial(k, m) for k in range(N)]


def lp_norm(a, p: float = 2.0) -> float:
    if p < 1:
        raise ValueError("lp_norm requires p >= 1")
    arr = np.abs(np.asarray([complex(x) for x in a]) if as_exact(a) else _array(a))
    if arr.size == 0:
        return 0.0
    if math.isinf(p):
        return float(arr.max())
    scale = arr.max()
    if scale == 0:
        return 0.0
    return float(scale * np.sum((arr / scale) ** p) ** (1.0 / p))


def inner(a, b):
    """<a, b> = sum a_n conj(b_n) over the common support."""
    n = min(len(a), len(b))
    if as_exact(a) and as_exact(b):
        total = 0
        for x, y in zip(a[:n], b[:n]):
            total = total + x * (y.conjugate() if isinstance(y, ExactComplex) else y)
        return total
    return complex(np.vdot(_array(b[:n]), _array(a[:n])))


def _abs2(x):
    return x.abs2() if isinstance(x, ExactComplex) else x * x


def hyponormal_form(a, horizon: int | None = None) -> Bracket:
    """Enclosure of <(C*C - CC*)a, a> = ||Ca||^2 - ||C*a||^2.

    Beyond the support m of ``a`` the entries of Ca equal S/(n+1) with
    S = sum a_j, so ||Ca||^2 = head + |S|^2 * sum_{n>=m} 1/(n+1)^2. The tail
    sum is bracketed by :func:`quadratic_tail` with ``horizon - m`` explicit
    terms (horizon defaults to max(4m, 10^4)). ||C*a||^2 is a finite sum.
    Exact inputs with S = 0 give a zero-width (exact) result.
    """
    m = len(a)
    if m == 0:
        return Bracket.from_fraction(0)
    horizon = max(4 * m, 10_000) if horizon is None else horizon
    if as_exact(a):
        ca = apply_cesaro(a)
        cs = apply_cesaro_adjoint(a)
        head = sum(_abs2(x) for x in ca) - sum(_abs2(x) for x in cs)
        s2 = _abs2(sum(a))
        if s2 == 0:
            return Bracket.from_fraction(head)
        return Bracket.from_fraction(head) + quadratic_tail(m, horizon - m) * Bracket.from_fraction(s2)
    arr = _array(a)
    ca = apply_cesaro(arr)
    cs = apply_cesaro_adjoint(arr)
    p1 = np.abs(ca) ** 2
    p2 = np.abs(cs) ** 2
    head = math.fsum(p1) - math.fsum(p2)
    # prefix/suffix sums of length m: relative error <= (m + 4) eps per entry
    err = (2 * m + 8) * EPS * (math.fsum(p1) + math.fsum(p2)) + 4 * math.ulp(abs(head) + 1e-300)
    s2 = abs(arr.sum()) ** 2
    s2_err = (2 * m + 4) * EPS * (np.abs(arr).sum() ** 2)
    out = Bracket.around(head, err)
    if s2 == 0 and s2_err == 0:
        return out
    return out + quadratic_tail(m, horizon - m) * Bracket.around(s2, s2_err)

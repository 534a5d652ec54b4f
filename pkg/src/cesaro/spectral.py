"""Norms, adjoint eigen-residuals and l^p bounds for the Cesàro operator.

The Cesàro sections are applied through prefix/suffix sums (O(N) per
product), so power iteration at N = 4096 and residuals at N = 10^5 are cheap.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from .matrices import MatrixTruncation
from .numerics import generalized_binomial, is_exact

__all__ = [
    "NormEstimate",
    "LpBoundReport",
    "operator_norm",
    "cesaro_section_norm",
    "sharpness_ratio",
    "adjoint_eigen_coefficients",
    "adjoint_eigen_residual",
    "point_spectrum_divergence_witness",
    "m_p",
    "lp_bound",
    "lp_bound_suite",
    "lp_sharpness_ratio",
    "disk_grid",
]


@dataclass
class NormEstimate:
    name: str
    N: int
    norm: float
    iterations: int
    residual: float
    converged: bool = True


def _c(v):
    return np.cumsum(v) / np.arange(1, len(v) + 1)


def _cstar(v):
    return np.cumsum((v / np.arange(1, len(v) + 1))[::-1])[::-1]


def _power(apply, apply_h, N, tol, maxit, name):
    v = np.full(N, 1 / math.sqrt(N))
    rq_prev, rq, res = -1.0, 0.0, math.inf
    for it in range(1, maxit + 1):
        w = apply(v)
        rq = float(np.vdot(w, w).real)
        u = apply_h(w)
        res = float(np.linalg.norm(u - rq * v))
        nu = np.linalg.norm(u)
        if nu == 0:
            return NormEstimate(name, N, 0.0, it, 0.0, True)
        v = u / nu
        if abs(rq - rq_prev) <= tol * max(rq, 1e-300):
            return NormEstimate(name, N, math.sqrt(rq), it, res, True)
        rq_prev = rq
    return NormEstimate(name, N, math.sqrt(rq), maxit, res, False)


def cesaro_section_norm(N: int, tol: float = 1e-13, maxit: int = 10_000) -> NormEstimate:
    """Norm of the N x N Cesàro section by power iteration on C_N* C_N."""
    return _power(_c, _cstar, N, tol, maxit, "cesaro")


def operator_norm(mat, N: int | None = None, tol: float = 1e-13, maxit: int = 10_000) -> NormEstimate:
    """Spectral norm of a finite section by power iteration from the all-ones vector.

    ``mat`` is a MatrixTruncation, or one of the names ``"cesaro"`` /
    ``"cesaro_adjoint"`` together with ``N`` (matrix-free path). Diagonal
    truncations return max |entry| directly.
    """
    if isinstance(mat, str):
        if N is None:
            raise ValueError("N required with a matrix name")
        if mat == "cesaro":
            return cesaro_section_norm(N, tol, maxit)
        if mat == "cesaro_adjoint":
            return _power(_cstar, _c, N, tol, maxit, mat)
        raise ValueError(f"no matrix-free path for {mat!r}; pass a MatrixTruncation")
    if not isinstance(mat, MatrixTruncation):
        raise TypeError("mat must be a MatrixTruncation or a name")
    if mat.structure == "diagonal":
        d = [abs(complex(mat[i, i])) for i in range(mat.N)]
        return NormEstimate(mat.name, mat.N, max(d), 0, 0.0, True)
    a = mat.to_numpy(complex)
    ah = a.conj().T
    return _power(lambda v: a @ v, lambda w: ah @ w, mat.N, tol, maxit, mat.name)


def sharpness_ratio(a_exponent: float, N: int) -> float:
    """||C* x|| / ||x|| for x_n = (n+1)^(-a), truncated to n < N."""
    if a_exponent <= 0.5:
        raise ValueError("a_exponent must exceed 1/2")
    x = np.arange(1, N + 1, dtype=float) ** (-a_exponent)
    return float(np.linalg.norm(_cstar(x)) / np.linalg.norm(x))


def _check_disk(lam):
    if not abs(1 - lam) < 1:
        raise ValueError(f"|1 - lambda| = {abs(1 - lam):.6g} >= 1: eigenfunction not square summable")


def adjoint_eigen_coefficients(lam, N: int):
    """Taylor coefficients c_k = (-1)^k binom(beta, k), beta = (1-lambda)/lambda, k < N.

    Exact (list of Fractions) when lambda is rational; complex array otherwise.
    """
    _check_disk(lam)
    if is_exact(lam):
        beta = (1 - Fraction(lam)) / Fraction(lam)
        if beta.denominator == 1 and beta >= 0:
            # finite support (1 - z)^beta
            n = int(beta)
            return [(-1) ** k * generalized_binomial(n, k) for k in range(min(N, n + 1))] + [0] * max(0, N - n - 1)
    beta = (1 - complex(lam)) / complex(lam)
    k = np.arange(1, N)
    ratios = (k - 1 - beta) / k
    return np.concatenate([[1.0 + 0j], np.cumprod(ratios)])


def adjoint_eigen_residual(lam, N: int) -> float:
    """||C*_N c - lambda c|| / ||c|| for the truncated adjoint eigenvector."""
    c = adjoint_eigen_coefficients(lam, N)
    if isinstance(c, list):
        lamq = Fraction(lam)
        cs = [Fraction(0)] * N
        acc = Fraction(0)
        for j in range(N - 1, -1, -1):
            acc += Fraction(c[j], j + 1)
            cs[j] = acc
        r2 = sum((x - lamq * y) ** 2 for x, y in zip(cs, c))
        return math.sqrt(r2 / sum(Fraction(y) ** 2 for y in c))
    lam = complex(lam)
    r = _cstar(c) - lam * c
    return float(np.linalg.norm(r) / np.linalg.norm(c))


def disk_grid(radius: float = 0.9, count: int = 25) -> list[complex]:
    """Deterministic points filling {|1 - lambda| <= radius}: centre plus rings."""
    pts = [1.0 + 0j]
    rings = [(radius / 3, 6), (2 * radius / 3, 8), (radius, count - 15)]
    for r, n in rings:
        pts.extend(1 + r * np.exp(2j * np.pi * (np.arange(n) + 0.5 * (r != radius)) / n))
    return [complex(p) for p in pts[:count]]


def point_spectrum_divergence_witness(n: int, N: int) -> list[float]:
    """Partial l^2 norms of the coefficients C(k, n), k = n..N, of z^n/(1-z)^(n+1)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    k = np.arange(n, N + 1, dtype=float)
    coef = np.ones_like(k)
    for j in range(n):
        coef *= (k - j) / (j + 1)
    return list(np.sqrt(np.cumsum(coef**2)))


# ------------------------------------------------------------------- l^p


def _mp_objective(t, p):
    return p * t ** (p - 1) + (1 - t) ** p - t**p


def m_p(p: float, xatol: float = 1e-12) -> float:
    """min over t in [0, 1/2] of p t^(p-1) + (1-t)^p - t^p (bounded Brent search)."""
    res = minimize_scalar(_mp_objective, bounds=(0.0, 0.5), args=(p,), method="bounded",
                          options={"xatol": xatol})
    return float(min(res.fun, _mp_objective(0.0, p), _mp_objective(0.5, p)))


def lp_bound(p: float) -> float:
    """Bound on ||I - C|| on l^p: 1/(p-1) for 1 < p <= 2, m_p^(-1/p) for p > 2."""
    if p <= 1:
        raise ValueError("p must exceed 1")
    if p <= 2:
        return 1.0 / (p - 1)
    return m_p(p) ** (-1.0 / p)


@dataclass
class LpBoundReport:
    p: float
    q: float
    bound: float
    m_p: float | None
    samples: int
    seed: int
    max_ratio_c: float
    max_ratio_i_minus_c: float
    passed: bool
    config: dict = field(default_factory=dict)


def _lp(x, p):
    return float(np.sum(np.abs(x) ** p) ** (1 / p))


def _upper_lp_with_tail(head, s_abs, m, p):
    # entries n >= m are S/(n+1) in magnitude: explicit up to T, then
    # (n+1)^-p <= integral over [n+1/2, n+3/2] by convexity
    T = 4 * m + 64
    explicit = s_abs**p * np.sum(np.arange(m + 1, T + 1, dtype=float) ** (-p))
    rest = s_abs**p * (T + 0.5) ** (1 - p) / (p - 1)
    return float((np.sum(np.abs(head) ** p) + explicit + rest) ** (1 / p))


def lp_bound_suite(p: float, samples: int = 1000, seed: int = 0x5EED, max_support: int = 64) -> LpBoundReport:
    """Check ||Ca||_p <= q||a||_p and ||(I-C)a||_p <= bound(p)||a||_p on random a.

    The infinite tail of Ca (and of (I-C)a) is included through an upper
    bound, so the ratios reported are upper estimates.
    """
    if p <= 1:
        raise ValueError("p must exceed 1")
    q = p / (p - 1)
    bound = lp_bound(p)
    rng = random.Random(seed)
    r1 = r2 = 0.0
    for _ in range(samples):
        m = rng.randint(1, max_support)
        a = np.array([complex(rng.random(), rng.random()) for _ in range(m)])
        ca = _c(a)
        s = abs(a.sum())
        na = _lp(a, p)
        r1 = max(r1, _upper_lp_with_tail(ca, s, m, p) / na)
        r2 = max(r2, _upper_lp_with_tail(a - ca, s, m, p) / na)
    tol = 1e-12
    passed = r1 <= q * (1 + tol) and r2 <= bound * (1 + tol)
    return LpBoundReport(p, q, bound, m_p(p) if p > 2 else None, samples, seed, r1, r2, passed,
                         {"max_support": max_support, "distribution": "uniform complex unit square"})


def lp_sharpness_ratio(p: float, eps: float = 0.05, N: int = 10**6) -> float:
    """||C x||_p / ||x||_p for x_n = (n+1)^-(1/p + eps), truncated to n < N."""
    x = np.arange(1, N + 1, dtype=float) ** (-(1 / p + eps))
    return _lp(_c(x), p) / _lp(x, p)

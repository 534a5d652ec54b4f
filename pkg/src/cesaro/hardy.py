"""Checks on the analytic-function side: C and C* acting on power series in the disk."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad

from .matrices import IdentityReport, check_identity
from .numerics import EPS, is_exact
from .sequences import apply_cesaro, apply_cesaro_adjoint
from .spectral import adjoint_eigen_coefficients, adjoint_eigen_residual

__all__ = [
    "TailedSequence",
    "DiskCheck",
    "phi_w_coefficients",
    "adjoint_eigen_check_phi",
    "cesaro_of_polynomial",
    "evaluate_series",
    "kriete_trutt_eval",
    "intertwining_check",
    "deddens_interpolation",
    "deddens_commutation",
    "adjoint_semigroup_check",
    "cesaro_flow_check",
    "DISK_POINTS",
]

# sample points with |z| <= 0.9
DISK_POINTS = (0.3, -0.5, 0.5j, 0.6 + 0.3j, -0.4 - 0.7j)


def _check_point(z, allow_zero=True):
    if not abs(z) < 1:
        raise ValueError(f"|z| = {abs(z):.6g} is not inside the unit disk")
    if not allow_zero and z == 0:
        raise ValueError("z must be nonzero")


@dataclass(frozen=True)
class TailedSequence:
    """Coefficients head[0..m-1], then S/(n+1) for every n >= m."""

    head: tuple
    S: complex

    @property
    def m(self) -> int:
        return len(self.head)


@dataclass
class DiskCheck:
    lhs: complex
    rhs: complex
    residual: float
    bound: float
    passed: bool
    detail: str = ""

    def __post_init__(self):
        self.lhs, self.rhs = complex(self.lhs), complex(self.rhs)
        self.residual, self.bound, self.passed = float(self.residual), float(self.bound), bool(self.passed)


def phi_w_coefficients(w, K: int):
    """Coefficients c_0..c_K of (1 - z)^(w/(1-w)); exact for rational w."""
    if not abs(w) < 1:
        raise ValueError("|w| must be < 1")
    lam = 1 - (Fraction(w) if is_exact(w) else complex(w))
    return adjoint_eigen_coefficients(lam, K + 1)


def adjoint_eigen_check_phi(w, K: int) -> tuple[float, float]:
    """(residual of C* phi_w = (1-w) phi_w on K+1 coefficients, tail estimate).

    The tail estimate is |c_K| sqrt(K / (2 Re beta + 1)), the size of the
    l^2 mass beyond K when |c_k| ~ k^-(Re beta + 1).
    """
    lam = 1 - (Fraction(w) if is_exact(w) else complex(w))
    res = adjoint_eigen_residual(lam, K + 1)
    c = phi_w_coefficients(w, K)
    beta = complex(w) / (1 - complex(w))
    last = abs(complex(c[-1]))
    tail = last * math.sqrt(K / (2 * beta.real + 1)) if last else 0.0
    return res, tail


def cesaro_of_polynomial(f) -> TailedSequence:
    """Cf for polynomial coefficients f: exact head plus the S/(n+1) tail."""
    head = apply_cesaro(list(f))
    S = sum(f)
    return TailedSequence(tuple(head), S)


def _geometric_tail_sum(S, z, m, eps=1e-18):
    """S * sum_{n>=m} z^n/(n+1) summed until the geometric bound drops below eps."""
    r = abs(z)
    total, n, zn = 0j, m, complex(z) ** m
    while True:
        bound = abs(S) * abs(zn) / ((n + 1) * (1 - r))
        if bound < eps * max(1.0, abs(total)):
            return complex(S) * total, bound
        total += zn / (n + 1)
        zn *= z
        n += 1


def evaluate_series(f, z) -> tuple[complex, float]:
    """sum f_n z^n with an error bound; ``f`` a coefficient list or TailedSequence."""
    _check_point(z)
    z = complex(z)
    head = f.head if isinstance(f, TailedSequence) else f
    val = complex(np.polyval([complex(c) for c in reversed(head)], z)) if len(head) else 0j
    err = 4 * len(head) * EPS * sum(abs(complex(c)) * abs(z) ** n for n, c in enumerate(head))
    if isinstance(f, TailedSequence) and f.S != 0:
        t, b = _geometric_tail_sum(f.S, z, f.m)
        val += t
        err += b + 4 * EPS * abs(t)
    return val, err


def _kt_coefficients(z, K):
    # conj of the coefficients of phi_{conj z}: (-1)^k binom(z/(1-z), k)
    beta = complex(z) / (1 - complex(z))
    k = np.arange(1, K)
    return np.concatenate([[1.0 + 0j], np.cumprod((k - 1 - beta) / k)]), beta


def kriete_trutt_eval(f, z, K: int = 10_000) -> tuple[complex, float]:
    """(Kf)(z) = <f, phi_{conj z}> and a bound on the neglected part.

    Finite f gives a finite sum (bound from rounding only). For a
    TailedSequence the terms n >= K are bounded by |S||c_K|(1/(K+1) + 1/d),
    d = 1 + Re b - (Im b)^2 / (2(K - Re b)), b = z/(1-z), from the ratio
    estimate |c_{n+1}/c_n| <= 1 - d/(n+1) for n >= K.
    """
    _check_point(z)
    head = list(f.head) if isinstance(f, TailedSequence) else list(f)
    m = len(head)
    n_terms = max(K, m) if isinstance(f, TailedSequence) else m
    c, beta = _kt_coefficients(z, max(n_terms, 1))
    h = np.asarray([complex(x) for x in head])
    terms = h * c[:m]
    bound = 0.0
    if isinstance(f, TailedSequence) and f.S != 0:
        n = np.arange(m, n_terms)
        terms = np.concatenate([terms, complex(f.S) / (n + 1) * c[m:n_terms]])
        Kc = n_terms
        d = 1 + beta.real - beta.imag**2 / (2 * (Kc - beta.real))
        if d <= 0:
            raise ValueError("K too small for a tail bound at this z")
        c_next = abs(c[Kc - 1] * (Kc - 1 - beta) / Kc)
        bound = abs(f.S) * c_next * (1 / (Kc + 1) + 1 / d)
    val = complex(math.fsum(terms.real) + 1j * math.fsum(terms.imag))
    bound += 4 * len(terms) * EPS * float(np.sum(np.abs(terms)))
    return val, bound


def intertwining_check(f, z, K: int = 10_000) -> DiskCheck:
    """|(K C f)(z) - (1 - z)(K f)(z)| against the combined error bounds."""
    cf = cesaro_of_polynomial(f)
    lhs, b1 = kriete_trutt_eval(cf, z, K)
    kf, b2 = kriete_trutt_eval(list(f), z, K)
    rhs = (1 - complex(z)) * kf
    res = abs(lhs - rhs)
    bound = b1 + abs(1 - complex(z)) * b2 + 1e-14 * max(1.0, abs(lhs))
    return DiskCheck(lhs, rhs, res, bound, res <= bound, f"K={K}")


def deddens_interpolation(alpha, n: int):
    """(F(1/n), (1-alpha)^(n-1)) with F(z) = (1-alpha)^(1/z - 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if is_exact(alpha):
        a = Fraction(alpha)
        if not 0 < a < 1:
            raise ValueError("alpha must lie in (0, 1)")
        z = Fraction(1, n)
        expo = 1 / z - 1  # an integer here
        return (1 - a) ** int(expo), (1 - a) ** (n - 1)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    z = 1.0 / n
    return (1 - alpha) ** (1 / z - 1), (1 - alpha) ** (n - 1)


def deddens_commutation(alpha, N: int = 12) -> IdentityReport:
    """Exact upper-triangular check that the Deddens matrix commutes with C*."""
    return check_identity("deddens_commute", N, alpha=Fraction(alpha) if is_exact(alpha) else alpha)


def _poly(f, w):
    return np.polyval([complex(c) for c in reversed(list(f))], w)


def adjoint_semigroup_check(f, z, nodes: int = 64) -> DiskCheck:
    """int_0^1 f(u z + 1 - u) du by Gauss-Legendre against (C* f)(z) from coefficients."""
    _check_point(z)
    x, w = np.polynomial.legendre.leggauss(nodes)
    u = 0.5 * (x + 1)
    lhs = complex(0.5 * np.sum(w * _poly(f, u * z + 1 - u)))
    rhs, err = evaluate_series(apply_cesaro_adjoint(list(f)), z)
    res = abs(lhs - rhs)
    scale = max(1.0, float(np.sum(np.abs([complex(c) for c in f]))))
    bound = err + 64 * EPS * scale
    return DiskCheck(lhs, rhs, res, bound, res <= max(bound, 1e-12), f"{nodes} Gauss-Legendre nodes")


def cesaro_flow_check(f, z, epsabs: float = 1e-14) -> DiskCheck:
    """int_0^1 f(uz/((u-1)z+1)) / ((u-1)z+1) du (adaptive) against (Cf)(z)."""
    _check_point(z, allow_zero=False)
    z = complex(z)

    def g(u):
        den = (u - 1) * z + 1
        return _poly(f, u * z / den) / den

    re, e1 = quad(lambda u: g(u).real, 0, 1, epsabs=epsabs, epsrel=1e-13, limit=200)
    im, e2 = quad(lambda u: g(u).imag, 0, 1, epsabs=epsabs, epsrel=1e-13, limit=200)
    lhs = complex(re, im)
    rhs, err = evaluate_series(cesaro_of_polynomial(f), z)
    res = abs(lhs - rhs)
    bound = err + e1 + e2 + 64 * EPS * max(1.0, abs(rhs))
    ok = res <= max(bound, 1e-12)
    return DiskCheck(lhs, rhs, res, bound, ok, f"quad error estimate {e1 + e2:.2e}")

"""Fourier coefficients, partial sums and Fejér means on the unit circle."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "SampledCircleFunction",
    "BUILTINS",
    "builtin",
    "fourier_coefficient",
    "fourier_coefficients",
    "partial_sum",
    "fejer_mean",
    "fejer_mean_from_partial_sums",
    "fejer_convolution",
    "fejer_kernel",
    "convergence_report",
    "report_to_csv",
]


def grid(M: int) -> np.ndarray:
    return 2 * np.pi * np.arange(M) / M


def _centered(theta):
    """Map angles to (-pi, pi]."""
    t = np.mod(np.asarray(theta, dtype=float) + np.pi, 2 * np.pi) - np.pi
    return np.where(t == -np.pi, np.pi, t)


@dataclass(frozen=True)
class SampledCircleFunction:
    """Samples at theta_j = 2 pi j / M; ``func`` (optional) regenerates them."""

    samples: np.ndarray
    func: Callable | None = None

    @property
    def M(self) -> int:
        return len(self.samples)

    @property
    def theta(self) -> np.ndarray:
        return grid(self.M)

    @classmethod
    def from_callable(cls, func: Callable, M: int) -> SampledCircleFunction:
        if M < 4:
            raise ValueError("need at least 4 samples")
        return cls(np.asarray(func(grid(M)), dtype=complex), func)

    def resample(self, M: int) -> SampledCircleFunction:
        if self.func is None:
            raise ValueError("no generating function to resample from")
        return SampledCircleFunction.from_callable(self.func, M)


def _sawtooth(t):
    c = _centered(t)
    return np.where(c == np.pi, 0.0, c)  # midpoint value at the jump


def _step(t):
    c = _centered(t)
    return np.where(c == np.pi, 0.0, np.sign(c))


BUILTINS: dict[str, Callable] = {
    "one": lambda t: np.ones_like(np.asarray(t, dtype=float)),
    "exp1": lambda t: np.exp(1j * np.asarray(t)),
    "abs": lambda t: np.abs(_centered(t)),
    "sawtooth": _sawtooth,
    "step": _step,
    "cos7": lambda t: np.cos(t) + 0.3 * np.cos(7 * np.asarray(t)),
    "tent": lambda t: np.maximum(0.0, 1 - 2 * np.abs(_centered(t)) / np.pi),
}


def builtin(name: str, M: int) -> SampledCircleFunction:
    if name not in BUILTINS:
        raise ValueError(f"unknown builtin {name!r}; expected one of {', '.join(BUILTINS)}")
    return SampledCircleFunction.from_callable(BUILTINS[name], M)


def fourier_coefficient(f: SampledCircleFunction, n: int) -> complex:
    """Trapezoidal f^(n) = (1/M) sum_j f(theta_j) exp(-i n theta_j)."""
    if 4 * abs(n) > f.M:
        raise ValueError(f"|n|={abs(n)} too large for a grid of {f.M} points (need |n| <= M/4)")
    return complex(np.mean(f.samples * np.exp(-1j * n * f.theta)))


def fourier_coefficients(f: SampledCircleFunction, N: int) -> np.ndarray:
    """Coefficients for k = -N..N (index k + N)."""
    if 4 * N > f.M:
        raise ValueError(f"N={N} too large for a grid of {f.M} points (need N <= M/4)")
    k = np.arange(-N, N + 1)
    return np.exp(-1j * np.outer(k, f.theta)) @ f.samples / f.M


def _synthesize(coeffs, N, theta):
    k = np.arange(-N, N + 1)
    return np.exp(1j * np.outer(theta, k)) @ coeffs


def _out_grid(f, M):
    return f.theta if M is None else grid(M)


def partial_sum(f: SampledCircleFunction, N: int, M: int | None = None) -> SampledCircleFunction:
    """S_N f = sum_{|k|<=N} f^(k) e^{ik theta}, sampled on an M-point grid (default f's)."""
    c = fourier_coefficients(f, N)
    return SampledCircleFunction(_synthesize(c, N, _out_grid(f, M)))


def fejer_mean(f: SampledCircleFunction, N: int, M: int | None = None) -> SampledCircleFunction:
    """sigma_N f via triangular weights (1 - |k|/(N+1))."""
    c = fourier_coefficients(f, N)
    w = 1 - np.abs(np.arange(-N, N + 1)) / (N + 1)
    return SampledCircleFunction(_synthesize(c * w, N, _out_grid(f, M)))


def fejer_mean_from_partial_sums(f: SampledCircleFunction, N: int) -> SampledCircleFunction:
    """sigma_N f as the arithmetic mean of S_0 f, ..., S_N f (independent route)."""
    c = fourier_coefficients(f, N)
    theta = f.theta
    acc = np.zeros(f.M, dtype=complex)
    s = np.full(f.M, c[N], dtype=complex)  # S_0
    acc += s
    for n in range(1, N + 1):
        s = s + c[N + n] * np.exp(1j * n * theta) + c[N - n] * np.exp(-1j * n * theta)
        acc += s
    return SampledCircleFunction(acc / (N + 1))


def fejer_kernel(N: int, theta) -> np.ndarray:
    """K_N(theta) = (1/(N+1)) (sin((N+1) theta/2) / sin(theta/2))^2, K_N(0) = N+1."""
    theta = np.asarray(theta, dtype=float)
    half = np.sin(theta / 2)
    small = np.abs(half) < 1e-12
    safe = np.where(small, 1.0, half)
    val = np.sin((N + 1) * theta / 2) ** 2 / ((N + 1) * safe**2)
    return np.where(small, float(N + 1), val)


def fejer_convolution(f: SampledCircleFunction, N: int) -> SampledCircleFunction:
    """(1/M) sum_j f(theta_j) K_N(theta - theta_j): sigma_N as an integral against the kernel."""
    theta = f.theta
    K = fejer_kernel(N, theta[:, None] - theta[None, :])
    return SampledCircleFunction(K @ f.samples / f.M)


def _norms(diff, which):
    a = np.abs(diff)
    table = {"sup": float(a.max()), "L1": float(a.mean()), "L2": float(np.sqrt(np.mean(a**2)))}
    return {k: table[k] for k in which}


def convergence_report(f: SampledCircleFunction, Ns, norms=("sup", "L1", "L2")) -> list[dict]:
    """Errors of sigma_N f against f on f's grid, one row per (N, norm).

    L1 and L2 are taken with respect to normalized arc length.
    """
    bad = [n for n in norms if n not in ("sup", "L1", "L2")]
    if bad:
        raise ValueError(f"unknown norms {bad}")
    rows = []
    for N in Ns:
        err = _norms(fejer_mean(f, N).samples - f.samples, norms)
        rows.extend({"N": N, "norm": k, "error": v} for k, v in err.items())
    return rows


def report_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: format(v, ".17g") if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()

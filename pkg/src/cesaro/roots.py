"""Square roots of the Cesàro matrix.

Every lower-triangular square root is A^sigma = W diag(sigma(k+1)/sqrt(k+1)) W
for a sign pattern sigma. The entries are alternating binomial sums with
heavy cancellation, so they are formed in mpmath with guard bits and only
then rounded to the requested precision (53 bits for "double").
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .matrices import IdentityReport, MatrixTruncation, build, multiply_exact_block
from .numerics import binomial

__all__ = [
    "SignPattern",
    "sqrt_series_coefficients",
    "sqrt_series_tail",
    "closed_form_root",
    "series_root",
    "verify_root",
    "block_norm_growth",
    "default_precision",
]


def default_precision() -> int | None:
    """Bits from CESARO_PRECISION_BITS, or None for double precision."""
    v = os.environ.get("CESARO_PRECISION_BITS")
    return int(v) if v else None


@dataclass(frozen=True)
class SignPattern:
    """sigma(1), ..., sigma(N) stored 0-based."""

    values: tuple[int, ...]

    def __post_init__(self):
        if any(v not in (1, -1) for v in self.values):
            raise ValueError("sign pattern values must be +1 or -1")

    @classmethod
    def constant(cls, sign: int, N: int) -> SignPattern:
        return cls((sign,) * N)

    @classmethod
    def sample(cls, N: int, rng: random.Random) -> SignPattern:
        return cls(tuple(rng.choice((1, -1)) for _ in range(N)))

    @classmethod
    def parse(cls, text: str, N: int | None = None) -> SignPattern:
        """'+' / '-' string; the last symbol repeats up to N."""
        vals = [1 if ch == "+" else -1 for ch in text if ch in "+-"]
        if not vals:
            raise ValueError(f"empty sign pattern {text!r}")
        if N is not None:
            vals = (vals + [vals[-1]] * N)[:N]
        return cls(tuple(vals))

    def __neg__(self):
        return SignPattern(tuple(-v for v in self.values))

    def __len__(self):
        return len(self.values)

    def __str__(self):
        return "".join("+" if v > 0 else "-" for v in self.values)


def sqrt_series_coefficients(K: int) -> list[Fraction]:
    """Taylor coefficients c_0..c_K of sqrt(1 - z)."""
    if K < 0:
        raise ValueError("K must be >= 0")
    c = [Fraction(1)]
    for k in range(1, K + 1):
        c.append(c[-1] * Fraction(2 * k - 3, 2 * k))
    return c


def sqrt_series_tail(K: int) -> Fraction:
    """sum_{k>K} |c_k|, exactly: since c_k < 0 for k >= 1 and sum c_k = 0, it equals sum_{k<=K} c_k."""
    return sum(sqrt_series_coefficients(K))


def _guard_bits(N: int) -> int:
    # |sum| of the alternating binomial terms is at most 4^N times the result scale
    return 2 * N + 48


def _mp_matrix_to_array(rows, prec):
    if prec is None:
        return np.array([[float(x) for x in r] for r in rows])
    with mpmath.workprec(prec):
        return np.array([[+x for x in r] for r in rows], dtype=object)


def closed_form_root(sigma: SignPattern, N: int | None = None, prec: int | None = None) -> MatrixTruncation:
    """A^sigma on the N x N block.

    A_ij = C(i,j) sum_l (-1)^l sigma(l+j+1) C(i-j,l) / sqrt(l+j+1). ``prec``
    is the mantissa size in bits of the stored entries; None stores float64.
    """
    N = len(sigma) if N is None else N
    if len(sigma) < N:
        raise ValueError("sign pattern shorter than N")
    wp = (prec or 53) + _guard_bits(N)
    with mpmath.workprec(wp):
        d = [sigma.values[k] / mpmath.sqrt(k + 1) for k in range(N)]
        rows = [[mpmath.mpf(0)] * N for _ in range(N)]
        for i in range(N):
            for j in range(i + 1):
                s = mpmath.mpf(0)
                for ell in range(i - j + 1):
                    t = binomial(i - j, ell) * d[ell + j]
                    s = s - t if ell % 2 else s + t
                rows[i][j] = binomial(i, j) * s
    ent = _mp_matrix_to_array(rows, prec)
    return MatrixTruncation("closed_form_root", ent, "lower", False,
                            {"sigma": str(SignPattern(sigma.values[:N])),
                             "prec": prec or 53})


def series_root(K: int, N: int) -> MatrixTruncation:
    """sum_{k<=K} c_k (I - C_N)^k, exactly.

    I - C = W diag(n/(n+1)) W with W an involution, so the partial sum is
    W diag(p_K(n/(n+1))) W, p_K the degree-K Taylor polynomial of sqrt(1-x).
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    c = sqrt_series_coefficients(K)
    diag = []
    for n in range(N):
        x = Fraction(n, n + 1)
        acc = Fraction(0)
        for ck in reversed(c):
            acc = acc * x + ck
        diag.append(acc)
    t = build("hausdorff", N, diag=diag)
    return MatrixTruncation("series_root", t.entries, "lower", True, {"K": K})


def _max_abs(rows):
    return max((abs(x) for r in rows for x in r), default=0)


def verify_root(A: MatrixTruncation, N: int | None = None, tol: float = 1e-8,
                prec: int | None = None) -> IdentityReport:
    """Compare the block product A A with the Cesàro block; pass iff max residual <= tol.

    Exact A: rational product. float64 A: product in double. mpmath A:
    product at ``prec`` (default: the precision A was stored with) plus
    enough guard bits to absorb the size of the entries.
    """
    N = A.N if N is None else N
    if A.structure not in ("lower", "diagonal"):
        raise ValueError("verify_root needs a lower-triangular matrix")
    c = build("cesaro", N)
    label = A.params.get("sigma", A.name)
    if A.exact:
        sq = multiply_exact_block(A, A, N)
        res = max(abs(Fraction(x) - Fraction(y)) for r, s in zip(sq.entries, c.entries) for x, y in zip(r, s))
        verdict = "exact-pass" if res == 0 else ("bounded-pass" if res <= tol else "fail")
        return IdentityReport("root_squared", N, N, verdict, float(res), 0.0, None, f"{label}; exact")
    ent = A.entries[:N, :N]
    if ent.dtype != object:
        a = np.asarray(ent, dtype=float)
        res = float(np.max(np.abs(np.tril(a @ a) - c.to_numpy())))
        detail = f"{label}; double"
    else:
        prec = prec or A.params.get("prec", 53)
        scale = max(1.0, float(_max_abs(ent.tolist())))
        wp = prec + 2 * int(math.log2(scale)) + 32 + N.bit_length()
        with mpmath.workprec(wp):
            res = mpmath.mpf(0)
            for i in range(N):
                for j in range(i + 1):
                    s = mpmath.fsum(ent[i, k] * ent[k, j] for k in range(j, i + 1))
                    res = max(res, abs(s - mpmath.mpf(1) / (i + 1)))
            res = float(res)
        detail = f"{label}; {prec} bits"
    verdict = "bounded-pass" if res <= tol else "fail"
    return IdentityReport("root_squared", N, N, verdict, res, 0.0, None, f"{detail}; tol {tol:g}")


def block_norm_growth(sigma: SignPattern, Ns) -> list[tuple[int, float]]:
    """Spectral norms of leading blocks of A^sigma (evidence only)."""
    A = closed_form_root(sigma, max(Ns), prec=max(Ns) * 2 + 64)
    out = []
    for n in Ns:
        block = np.array([[float(x) for x in r] for r in A.entries[:n, :n]])
        out.append((n, float(np.linalg.norm(block, 2))))
    return out

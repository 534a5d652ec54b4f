"""Leading blocks of the named infinite matrices and exact identity checks.

Exact matrices hold rows of ints/Fractions; approximate ones hold a numpy
array. Products of two lower (or two upper) triangular blocks, and of a lower
by an upper block, only involve indices inside the block, so they equal the
corresponding block of the infinite product. Products whose entries are
infinite sums go through :func:`multiply_with_tail`.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .numerics import EPS, Bracket, binomial, is_exact, quadratic_tail, telescoping_tail
from .sequences import apply_cesaro, eigenvector_bm, unit_vector

__all__ = [
    "MatrixTruncation",
    "IdentityReport",
    "MATRIX_NAMES",
    "IDENTITIES",
    "build",
    "multiply_exact_block",
    "multiply_with_tail",
    "check_identity",
    "column_shift",
    "identity_matrix",
    "to_csv",
    "to_json",
    "from_json",
]

LOWER, UPPER, DIAGONAL, FULL = "lower", "upper", "diagonal", "full"


@dataclass(frozen=True)
class MatrixTruncation:
    """N x N leading block of a named infinite matrix."""

    name: str
    entries: object  # list[list[int | Fraction]] when exact, else np.ndarray
    structure: str
    exact: bool
    params: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return len(self.entries)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j] if self.exact else self.entries[i, j]

    def rows(self) -> list[list]:
        if self.exact:
            return [list(r) for r in self.entries]
        return self.entries.tolist()

    def to_numpy(self, dtype=None) -> np.ndarray:
        if not self.exact:
            return np.asarray(self.entries, dtype=dtype)
        return np.array([[float(x) for x in r] for r in self.entries], dtype=dtype or float)

    def block(self, M: int) -> MatrixTruncation:
        if M > self.N:
            raise ValueError(f"block size {M} exceeds truncation size {self.N}")
        ent = [r[:M] for r in self.entries[:M]] if self.exact else self.entries[:M, :M].copy()
        return MatrixTruncation(self.name, ent, self.structure, self.exact, dict(self.params))

    def __neg__(self):
        if self.exact:
            return MatrixTruncation(self.name, [[-x for x in r] for r in self.entries],
                                    self.structure, True, dict(self.params))
        return MatrixTruncation(self.name, -self.entries, self.structure, False, dict(self.params))

    def __sub__(self, other: MatrixTruncation) -> MatrixTruncation:
        if self.N != other.N:
            raise ValueError("size mismatch")
        if self.exact and other.exact:
            ent = [[x - y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)]
            return _from_rows("custom", ent)
        return _from_array("custom", self.to_numpy(complex) - other.to_numpy(complex))


@dataclass
class IdentityReport:
    identity: str
    N: int
    block: int
    verdict: str  # "exact-pass" | "bounded-pass" | "fail"
    max_residual: float
    tail_bound: float = 0.0
    offending_entry: tuple[int, int] | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict != "fail"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["offending_entry"] = list(self.offending_entry) if self.offending_entry else None
        return d


# ---------------------------------------------------------------- structure


def _infer_structure(rows, exact=True) -> str:
    n = len(rows)
    get = (lambda i, j: rows[i][j]) if exact else (lambda i, j: rows[i, j])
    lower = all(get(i, j) == 0 for i in range(n) for j in range(i + 1, n))
    upper = all(get(i, j) == 0 for i in range(n) for j in range(i))
    if lower and upper:
        return DIAGONAL
    if lower:
        return LOWER
    if upper:
        return UPPER
    return FULL


def _from_rows(name, rows, structure=None, **params) -> MatrixTruncation:
    rows = [[x if isinstance(x, int) else Fraction(x) for x in r] for r in rows]
    return MatrixTruncation(name, rows, structure or _infer_structure(rows), True, params)


def _from_array(name, arr, structure=None, **params) -> MatrixTruncation:
    arr = np.asarray(arr)
    if np.iscomplexobj(arr) and not np.any(arr.imag):
        arr = arr.real.copy()
    return MatrixTruncation(name, arr, structure or _infer_structure(arr, exact=False), False, params)


def identity_matrix(N: int) -> MatrixTruncation:
    return _from_rows("identity", [[int(i == j) for j in range(N)] for i in range(N)], DIAGONAL)


# ----------------------------------------------------------------- builders


def _w_rows(N):
    return [[(-1) ** j * binomial(i, j) for j in range(N)] for i in range(N)]


def _hausdorff_rows(N, diag):
    """Rows of W diag(z) W, summed exactly: sum_k (-1)^(j+k) C(i,k) C(k,j) z_k."""
    rows = [[0] * N for _ in range(N)]
    for i in range(N):
        for j in range(i + 1):
            s = 0
            for k in range(j, i + 1):
                term = binomial(i, k) * binomial(k, j) * diag[k]
                s += term if (j + k) % 2 == 0 else -term
            rows[i][j] = s
    return rows


def _exactify(values):
    """Rational images of float inputs (exact binary values)."""
    return [v if is_exact(v) else Fraction(float(v)) for v in values]


def _hausdorff(N, diag, name, **params):
    diag = list(diag)
    if len(diag) < N:
        raise ValueError(f"{name} needs at least N={N} diagonal entries")
    diag = diag[:N]
    if all(is_exact(z) for z in diag):
        return _from_rows(name, _hausdorff_rows(N, diag), LOWER, **params)
    arr = np.asarray(diag, dtype=complex)
    re = _hausdorff_rows(N, _exactify(arr.real))
    im = _hausdorff_rows(N, _exactify(arr.imag))
    out = np.array([[float(a) for a in r] for r in re]) + 1j * np.array([[float(b) for b in r] for r in im])
    return _from_array(name, out, LOWER, **params)


def _cesaro_order_weight(r: int, z: Fraction) -> Fraction:
    num = Fraction(math.factorial(r)) * z**r
    den = Fraction(1)
    for m in range(1, r):
        den *= 1 + m * z
    return num / den


def _g_coeff(g, k):
    return g[k] if k < len(g) else 0


def _gen_cesaro_rows(N, g):
    return [[_g_coeff(g, i - j + 1) * Fraction(i - j + 1, i + 1) if i >= j else 0
             for j in range(N)] for i in range(N)]


def _gen_hilbert_rows(N, g):
    return [[_g_coeff(g, i + 1) * Fraction(i + 1, i + j + 1) for j in range(N)] for i in range(N)]


def _contraction_a_rows(N):
    # A := C* C^{-1}, which satisfies C* = A C entrywise
    rows = [[0] * N for _ in range(N)]
    for i in range(N):
        for j in range(N):
            if j >= i:
                rows[i][j] = Fraction(1, j + 2)
            elif j == i - 1:
                rows[i][j] = Fraction(-i, i + 1)
    return rows


def _deddens(N, alpha):
    if is_exact(alpha):
        rows = [[binomial(n, k) * Fraction(alpha) ** (n - k) * (1 - Fraction(alpha)) ** k if n >= k else 0
                 for n in range(N)] for k in range(N)]
        return _from_rows("deddens", rows, UPPER, alpha=alpha)
    arr = np.zeros((N, N), dtype=complex)
    for k in range(N):
        for n in range(k, N):
            arr[k, n] = binomial(n, k) * alpha ** (n - k) * (1 - alpha) ** k
    return _from_array("deddens", arr, UPPER, alpha=alpha)


def _euler(N, lam):
    if is_exact(lam):
        return _hausdorff(N, [Fraction(lam) ** i for i in range(N)], "euler", lam=lam)
    arr = np.zeros((N, N), dtype=complex)
    for n in range(N):
        for k in range(n + 1):
            arr[n, k] = binomial(n, k) * lam**k * (1 - lam) ** (n - k)
    return _from_array("euler", arr, LOWER, lam=lam)


def _require(params, key):
    if key not in params:
        raise ValueError(f"missing parameter {key!r}")
    return params[key]


def _positive_int(params, key):
    v = _require(params, key)
    if int(v) != v or v < 1:
        raise ValueError(f"{key} must be a positive integer")
    return int(v)


_BUILDERS: dict[str, Callable[..., MatrixTruncation]] = {
    "cesaro": lambda N, **p: _from_rows(
        "cesaro", [[Fraction(1, i + 1) if j <= i else 0 for j in range(N)] for i in range(N)], LOWER),
    "cesaro_inverse": lambda N, **p: _from_rows(
        "cesaro_inverse",
        [[j + 1 if i == j else (-j - 1 if i == j + 1 else 0) for j in range(N)] for i in range(N)], LOWER),
    "cesaro_adjoint": lambda N, **p: _from_rows(
        "cesaro_adjoint", [[Fraction(1, j + 1) if j >= i else 0 for j in range(N)] for i in range(N)], UPPER),
    "binomial_w": lambda N, **p: _from_rows("binomial_w", _w_rows(N), LOWER),
    "diag_reciprocal": lambda N, **p: _from_rows(
        "diag_reciprocal", [[Fraction(1, i + 1) if i == j else 0 for j in range(N)] for i in range(N)], DIAGONAL),
    "diag_interrupter": lambda N, **p: _from_rows(
        "diag_interrupter", [[Fraction(i + 1, i + 2) if i == j else 0 for j in range(N)] for i in range(N)],
        DIAGONAL),
    "hilbert": lambda N, **p: _from_rows(
        "hilbert", [[Fraction(1, i + j + 1) for j in range(N)] for i in range(N)], FULL),
    "bennett_b": lambda N, **p: _from_rows(
        "bennett_b", [[Fraction(j + 1, (i + j + 1) * (i + j + 2)) for j in range(N)] for i in range(N)], FULL),
    "l_max": lambda N, **p: _from_rows(
        "l_max", [[Fraction(1, max(i, j) + 1) for j in range(N)] for i in range(N)], FULL),
    "shift": lambda N, **p: _from_rows("shift", [[int(i == j + 1) for j in range(N)] for i in range(N)], LOWER),
    "contraction_a": lambda N, **p: _from_rows("contraction_a", _contraction_a_rows(N), FULL),
    "euler": lambda N, **p: _euler(N, _require(p, "lam")),
    "hausdorff": lambda N, **p: _hausdorff(N, _require(p, "diag"), "hausdorff"),
    "deddens": lambda N, **p: _deddens(N, _require(p, "alpha")),
    "holder_order": lambda N, **p: _hausdorff(
        N, [Fraction(1, i + 1) ** _positive_int(p, "r") for i in range(N)], "holder_order", r=p["r"]),
    "cesaro_order": lambda N, **p: _hausdorff(
        N, [_cesaro_order_weight(_positive_int(p, "r"), Fraction(1, i + 1)) for i in range(N)],
        "cesaro_order", r=p["r"]),
    "generalized_cesaro": lambda N, **p: _from_rows(
        "generalized_cesaro", _gen_cesaro_rows(N, _exactify(_require(p, "g"))), LOWER, g=list(p["g"])),
    "generalized_hilbert": lambda N, **p: _from_rows(
        "generalized_hilbert", _gen_hilbert_rows(N, _exactify(_require(p, "g"))), FULL, g=list(p["g"])),
    "custom": lambda N, **p: _custom(N, _require(p, "entries")),
}

MATRIX_NAMES = tuple(_BUILDERS)


def _custom(N, entries):
    if len(entries) != N or any(len(r) != N for r in entries):
        raise ValueError("custom entries must be N x N")
    if all(is_exact(x) for r in entries for x in r):
        return _from_rows("custom", entries)
    return _from_array("custom", np.asarray(entries))


def build(name: str, N: int, **params) -> MatrixTruncation:
    """Leading N x N block of the infinite matrix ``name``.

    >>> build("cesaro", 3).rows()[2]
    [Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)]
    """
    key = name.lower().replace("-", "_")
    if key not in _BUILDERS:
        raise ValueError(f"unknown matrix {name!r}; expected one of {', '.join(MATRIX_NAMES)}")
    if N < 1:
        raise ValueError("N must be >= 1")
    return _BUILDERS[key](N, **params)


# ----------------------------------------------------------------- products


def _closes(sa: str, sb: str) -> bool:
    lowerish, upperish = (LOWER, DIAGONAL), (UPPER, DIAGONAL)
    return (sa in lowerish and sb in lowerish) or (sa in upperish and sb in upperish) or (
        sa in lowerish and sb in upperish)


def _k_range(sa, sb, i, j):
    if sa == DIAGONAL:
        return range(i, i + 1)
    if sb == DIAGONAL:
        return range(j, j + 1)
    if sa == LOWER and sb == LOWER:
        return range(j, i + 1)
    if sa == UPPER and sb == UPPER:
        return range(i, j + 1)
    return range(min(i, j) + 1)  # lower * upper


def _integer_form(rows, M):
    den = 1
    for r in rows[:M]:
        for x in r[:M]:
            if isinstance(x, Fraction):
                den = math.lcm(den, x.denominator)
    return [[int(x * den) for x in r[:M]] for r in rows[:M]], den


def multiply_exact_block(A: MatrixTruncation, B: MatrixTruncation, M: int | None = None) -> MatrixTruncation:
    """M x M block of the infinite product A B, exact when both factors are.

    Only structure pairs whose entry sums close inside the block are
    accepted: lower*lower, upper*upper, lower*upper (diagonal counts as
    either).
    """
    M = min(A.N, B.N) if M is None else M
    if M > A.N or M > B.N:
        raise ValueError("block size exceeds truncation size")
    if not _closes(A.structure, B.structure):
        raise ValueError(
            f"{A.structure}*{B.structure} product has infinite entry sums; use multiply_with_tail")
    name = f"{A.name}*{B.name}"
    if A.exact and B.exact:
        IA, da = _integer_form(A.entries, M)
        IB, db = _integer_form(B.entries, M)
        den = da * db
        rows = [[0] * M for _ in range(M)]
        for i in range(M):
            Ai = IA[i]
            for j in range(M):
                s = 0
                for k in _k_range(A.structure, B.structure, i, j):
                    a = Ai[k]
                    if a:
                        s += a * IB[k][j]
                rows[i][j] = Fraction(s, den) if den != 1 else s
        return _from_rows(name, rows)
    a = A.to_numpy(complex)[:M, :M]
    b = B.to_numpy(complex)[:M, :M]
    return _from_array(name, a @ b)


def _mat_vec_exact(A: MatrixTruncation, v) -> list:
    out = []
    for i in range(A.N):
        s = 0
        for j, x in enumerate(A.entries[i]):
            if x and v[j]:
                s += x * v[j]
        out.append(s)
    return out


# Term formulas for the infinite products (float, vectorized over k).
# Each entry (i, j) is sum_k left(i, k) * right(k, j).

def _bc_terms(i, j, k):
    return ((k + 1) / ((i + k + 1) * (i + k + 2))) * np.where(k >= j, 1.0 / (k + 1), 0.0)


def _ac_terms(i, j, k):
    a = np.where(k >= i, 1.0 / (k + 2), np.where(k == i - 1, -i / (i + 1), 0.0))
    return a * np.where(k >= j, 1.0 / (k + 1), 0.0)


_TAIL_PAIRS = {"B*C": "bc", "BC": "bc", "C*DC": "cstar_dc", "CSTAR_D_C": "cstar_dc",
               "A*C": "ac", "AC": "ac", "C*C": "cstar_c", "CSTAR_C": "cstar_c"}


def multiply_with_tail(pair: str, M: int, T: int = 100_000) -> list[list[Bracket]]:
    """Bracketed M x M block of a product whose entries are infinite sums.

    pair is one of ``"B*C"``, ``"C*DC"`` (C* . D . C with D the interrupter
    diag((k+1)/(k+2))), ``"A*C"``, ``"C*C"``. Terms with k < T are summed and
    the rest is enclosed analytically:

    * B*C, A*C: |term_k| <= 1/((k+1)(k+2)), so the tail lies in [-1/(T+1), 1/(T+1)]
      (B*C terms are positive, so [0, 1/(T+1)] there).
    * C*DC: term_k = 1/((k+1)(k+2)) exactly for k >= max(i, j); the head is
      summed in rationals inside the block and the tail is telescoping_tail(M).
    * C*C: term_k = 1/(k+1)^2 for k >= max(i, j); quadratic_tail with the
      same horizon T.
    """
    key = _TAIL_PAIRS.get(pair.upper().replace(" ", "").replace("·", "*"))
    if key is None:
        raise ValueError(f"unknown pair {pair!r}")
    if M < 1:
        raise ValueError("M must be >= 1")
    out = [[None] * M for _ in range(M)]
    if key == "cstar_dc":
        cs = build("cesaro_adjoint", M)
        d = build("diag_interrupter", M)
        c = build("cesaro", M)
        for i in range(M):
            for j in range(M):
                head = sum(cs[i, k] * d[k, k] * c[k, j] for k in range(M))
                out[i][j] = Bracket.from_fraction(head + telescoping_tail(M))
        return out
    if key == "cstar_c":
        for i in range(M):
            for j in range(M):
                m = max(i, j)
                if m == 0:
                    out[i][j] = 1 + quadratic_tail(1, max(T - 1, 0))
                else:
                    out[i][j] = quadratic_tail(m, max(T - m, 0))
        return out
    k = np.arange(T, dtype=float)
    terms_fn = _bc_terms if key == "bc" else _ac_terms
    tail = 1.0 / (T + 1)
    for i in range(M):
        for j in range(M):
            t = terms_fn(i, j, k)
            head = math.fsum(t)
            err = 4 * EPS * math.fsum(np.abs(t)) + math.ulp(abs(head) + 1e-300)
            lo_tail = 0.0 if key == "bc" else -tail
            out[i][j] = Bracket.around(head, err) + Bracket(lo_tail, tail)
    return out


# --------------------------------------------------------------- identities


def _compare_exact(identity, N, M, got, want) -> IdentityReport:
    worst, where = Fraction(0), None
    for i in range(M):
        for j in range(M):
            d = abs(Fraction(got[i][j]) - Fraction(want[i][j]))
            if d > worst:
                worst, where = d, (i, j)
    verdict = "exact-pass" if worst == 0 else "fail"
    return IdentityReport(identity, N, M, verdict, float(worst), 0.0, where)


def _compare_brackets(identity, N, M, got: list[list[Bracket]], want, tol) -> IdentityReport:
    worst, width, where, ok, all_exact = 0.0, 0.0, None, True, True
    for i in range(M):
        for j in range(M):
            b, w = got[i][j], Fraction(want[i][j])
            if b.exact is None or b.exact != w:
                all_exact = False
            if b.exact is not None:
                res = float(abs(b.exact - w))
            else:
                res = abs(b.mid - float(w))
                width = max(width, b.width)
            inside = Fraction(b.lo) - Fraction(tol) <= w <= Fraction(b.hi) + Fraction(tol)
            if not inside and ok:
                ok, where = False, (i, j)
            if res > worst:
                worst = res
                if ok:
                    where = (i, j)
    verdict = "fail" if not ok else ("exact-pass" if all_exact else "bounded-pass")
    return IdentityReport(identity, N, M, verdict, worst, width, where if not ok else None)


def random_rational_diagonal(N: int, rng: random.Random) -> list[Fraction]:
    return [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(N)]


def random_polynomial_g(rng: random.Random, degree: int | None = None) -> list[Fraction]:
    degree = rng.randint(1, 6) if degree is None else degree
    return [Fraction(0)] + [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(degree)]


def _hausdorff_check(N, M, diags):
    c = build("cesaro", N)
    w = build("binomial_w", N)
    worst = None
    for idx, diag in enumerate(diags):
        t = build("hausdorff", N, diag=diag)
        rep = _compare_exact("hausdorff_commute", N, M, multiply_exact_block(t, c, M).entries,
                             multiply_exact_block(c, t, M).entries)
        conv = multiply_exact_block(multiply_exact_block(w, t, M), w, M)
        back = _compare_exact("hausdorff_commute", N, M, conv.entries,
                              [[diag[i] if i == j else 0 for j in range(M)] for i in range(M)])
        for r in (rep, back):
            if not r.passed:
                r.detail = f"diagonal #{idx}"
                return r
        worst = rep
    worst.detail = f"{len(diags)} diagonals; commutation and W T W = diag"
    return worst


def check_identity(identity: str, N: int = 64, M: int | None = None, tol: float = 0.0,
                   **params) -> IdentityReport:
    """Check one matrix identity on the M x M block (M defaults to N).

    Exact identities compare rationals entry by entry. The bounded ones
    (``h_bc``, ``cstar_dc``, ``cstar_ac``, ``cstar_c``) use
    :func:`multiply_with_tail` with horizon ``params.get("T", 10**5)``.
    """
    M = N if M is None else M
    if M > N:
        raise ValueError("M must be <= N")
    key = identity.lower().replace("-", "_")
    if key == "w_squared":
        w = build("binomial_w", N)
        return _compare_exact(key, N, M, multiply_exact_block(w, w, M).entries, identity_matrix(M).entries)
    if key == "c_wdw":
        w, d = build("binomial_w", N), build("diag_reciprocal", N)
        got = multiply_exact_block(multiply_exact_block(w, d, M), w, M)
        return _compare_exact(key, N, M, got.entries, build("cesaro", M).entries)
    if key == "l_ccstar":
        got = multiply_exact_block(build("cesaro", N), build("cesaro_adjoint", N), M)
        return _compare_exact(key, N, M, got.entries, build("l_max", M).entries)
    if key == "i_minus_c":
        x = identity_matrix(N) - build("cesaro", N)
        xs = _from_rows("i-c*", [list(r) for r in zip(*x.entries)], UPPER)
        got = multiply_exact_block(x, xs, M)
        want = [[Fraction(i, i + 1) if i == j else 0 for j in range(M)] for i in range(M)]
        return _compare_exact(key, N, M, got.entries, want)
    if key == "hausdorff_commute":
        diags = params.get("diags")
        if diags is None:
            rng = random.Random(params.get("seed", 0x5EED))
            diags = [random_rational_diagonal(N, rng) for _ in range(params.get("count", 20))]
        return _hausdorff_check(N, M, diags)
    if key == "deddens_commute":
        alpha = params.get("alpha", Fraction(1, 2))
        dd, cs = build("deddens", N, alpha=alpha), build("cesaro_adjoint", N)
        rep = _compare_exact(key, N, M, multiply_exact_block(dd, cs, M).entries,
                             multiply_exact_block(cs, dd, M).entries)
        rep.detail = f"alpha={alpha}"
        return rep
    if key == "column_shift":
        gs = params.get("gs")
        if gs is None:
            rng = random.Random(params.get("seed", 0x5EED))
            gs = [random_polynomial_g(rng) for _ in range(params.get("count", 5))]
        rep = None
        for g in gs:
            shifted = column_shift(build("generalized_hilbert", N, g=g))
            rep = _compare_exact(key, N, M, shifted.entries, build("generalized_cesaro", N, g=g).entries)
            if not rep.passed:
                rep.detail = f"g={[str(x) for x in g]}"
                return rep
        rep.detail = f"{len(gs)} polynomial symbols"
        return rep
    if key == "euler_semigroup":
        lam = Fraction(params.get("lam", Fraction(1, 3)))
        mu = Fraction(params.get("mu", Fraction(3, 4)))
        got = multiply_exact_block(build("euler", N, lam=lam), build("euler", N, lam=mu), M)
        rep = _compare_exact(key, N, M, got.entries, build("euler", M, lam=lam * mu).entries)
        rep.detail = f"lam={lam}, mu={mu}"
        return rep
    if key == "range":
        worst = Fraction(0)
        where = None
        for n in range(M - 1):
            lhs = [x - y for x, y in zip(apply_cesaro(unit_vector(n, N)), apply_cesaro(unit_vector(n + 1, N)))]
            rhs = [Fraction(1, n + 1) if k == n else 0 for k in range(N)]
            d = max(abs(x - y) for x, y in zip(lhs, rhs))
            if d > worst:
                worst, where = d, (n, n)
        return IdentityReport(key, N, M, "exact-pass" if worst == 0 else "fail", float(worst), 0.0, where,
                              "C e_n - C e_{n+1} = e_n/(n+1)")
    if key == "eigenvectors":
        c = build("cesaro", N)
        count = params.get("count", min(N, 11))
        worst, where = Fraction(0), None
        for m in range(count):
            b = eigenvector_bm(m, N)
            got = _mat_vec_exact(c, b)
            d = max(abs(x - Fraction(y, m + 1)) for x, y in zip(got, b))
            if d > worst:
                worst, where = d, (m, m)
        return IdentityReport(key, N, M, "exact-pass" if worst == 0 else "fail", float(worst), 0.0, where,
                              f"C b_m = b_m/(m+1) for m < {count}")
    T = params.get("T", 100_000)
    if key == "h_bc":
        return _compare_brackets(key, N, M, multiply_with_tail("B*C", M, T), build("hilbert", M).entries, tol)
    if key == "cstar_dc":
        want = multiply_exact_block(build("cesaro", M), build("cesaro_adjoint", M)).entries
        return _compare_brackets(key, N, M, multiply_with_tail("C*DC", M, T), want, tol)
    if key == "cstar_ac":
        return _compare_brackets(key, N, M, multiply_with_tail("A*C", M, T),
                                 build("cesaro_adjoint", M).entries, tol)
    if key == "cstar_c":
        # the closed form sum_{k>=max(i,j)} 1/(k+1)^2 has no rational target;
        # report the bracket widths against their own midpoints
        got = multiply_with_tail("C*C", M, T)
        width = max(b.width for r in got for b in r)
        return IdentityReport(key, N, M, "bounded-pass", 0.0, width, None, "entries bracketed")
    raise ValueError(f"unknown identity {identity!r}; expected one of {', '.join(IDENTITIES)}")


IDENTITIES = ("w_squared", "c_wdw", "l_ccstar", "i_minus_c", "hausdorff_commute", "deddens_commute",
              "column_shift", "euler_semigroup", "range", "eigenvectors", "h_bc", "cstar_dc", "cstar_ac",
              "cstar_c")


def column_shift(H: MatrixTruncation) -> MatrixTruncation:
    """Move column n of H down n places, zero-filling above: out[n+k, n] = H[k, n]."""
    N = H.N
    if H.exact:
        rows = [[0] * N for _ in range(N)]
        for n in range(N):
            for k in range(N - n):
                rows[n + k][n] = H[k, n]
        return _from_rows(f"shift({H.name})", rows, LOWER)
    arr = np.zeros_like(H.entries)
    for n in range(N):
        arr[n:, n] = H.entries[: N - n, n]
    return _from_array(f"shift({H.name})", arr, LOWER)


# ------------------------------------------------------------ serialization


def _fmt(x) -> str:
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        return f"{f.numerator}/{f.denominator}"
    x = complex(x)
    if x.imag == 0:
        return format(x.real, ".17g")
    return f"{x.real:.17g}{x.imag:+.17g}j"


def _parse(s: str):
    if "/" in s and "j" not in s:
        return Fraction(s)
    v = complex(s.replace(" ", ""))
    return v.real if v.imag == 0 else v


def to_csv(mat: MatrixTruncation) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for r in mat.rows():
        writer.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _jsonable_params(params):
    out = {}
    for k, v in params.items():
        if isinstance(v, (list, tuple)):
            out[k] = [_fmt(x) for x in v]
        elif isinstance(v, (int, float, Fraction, complex)):
            out[k] = _fmt(v)
        else:
            out[k] = str(v)
    return out


def to_json(mat: MatrixTruncation) -> str:
    doc = {
        "name": mat.name,
        "N": mat.N,
        "structure": mat.structure,
        "exactness": "exact" if mat.exact else "approximate",
        "params": _jsonable_params(mat.params),
        "entries": [[_fmt(x) for x in r] for r in mat.rows()],
    }
    return json.dumps(doc, indent=1)


def from_json(text: str) -> MatrixTruncation:
    doc = json.loads(text)
    rows = [[_parse(s) for s in r] for r in doc["entries"]]
    if doc["exactness"] == "exact":
        return MatrixTruncation(doc["name"], [[x.numerator if x.denominator == 1 else x for x in r] for r in rows],
                                doc["structure"], True, doc.get("params", {}))
    return MatrixTruncation(doc["name"], np.asarray(rows), doc["structure"], False, doc.get("params", {}))

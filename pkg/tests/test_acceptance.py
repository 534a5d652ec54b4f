"""End-to-end acceptance checks, one group per criterion.

Each check records a PASS/FAIL line before asserting; the lines are printed
in a summary section at the end of the pytest run. Run directly with
``python3 tests/test_acceptance.py`` for just this module.
"""

import random
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from cesaro import continuous, hardy, summability
from cesaro.fourier import builtin, convergence_report, fejer_kernel
from cesaro.matrices import check_identity
from cesaro.numerics import bernoulli
from cesaro.roots import SignPattern, closed_form_root, series_root, sqrt_series_coefficients, sqrt_series_tail, verify_root
from cesaro.sequences import hyponormal_form
from cesaro.spectral import (
    adjoint_eigen_residual,
    disk_grid,
    lp_bound,
    lp_bound_suite,
    operator_norm,
    point_spectrum_divergence_witness,
    sharpness_ratio,
)
from conftest import ACCEPTANCE_LINES

F = Fraction
SEED = 0x5EED


def record(key: str, label: str, ok: bool, detail: str):
    crit = key.split(".")[0]
    ACCEPTANCE_LINES[key] = f"CRITERION {crit} [{label}]: {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, ACCEPTANCE_LINES[key]


def random_polys(rng, count, max_degree):
    return [[complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(rng.randint(1, max_degree + 1))]
            for _ in range(count)]


# 1 ---------------------------------------------------------------- exact identities

EXACT_SUITE = [("w_squared", {}), ("c_wdw", {}), ("l_ccstar", {}), ("i_minus_c", {}),
               ("hausdorff_commute", {"count": 20, "seed": SEED}),
               ("deddens_commute", {"alpha": F(1, 2)}), ("deddens_commute", {"alpha": F(1, 3)}),
               ("column_shift", {"count": 5, "seed": SEED}), ("euler_semigroup", {}), ("range", {}),
               ("eigenvectors", {})]


def test_exact_identity_suite():
    t0 = time.perf_counter()
    reports = [check_identity(name, 64, **params) for name, params in EXACT_SUITE]
    elapsed = time.perf_counter() - t0
    bad = [r.identity for r in reports if r.verdict != "exact-pass" or r.max_residual != 0]
    record("1.a", "all exact at N=64", not bad, f"{len(reports) - len(bad)}/{len(reports)} exact-pass {bad or ''}")
    record("1.b", "runtime < 30 s", elapsed < 30, f"{elapsed:.1f} s")


# 2 -------------------------------------------------------------- bounded identities

@pytest.mark.parametrize("name", ["h_bc", "cstar_dc", "cstar_ac"])
def test_bounded_identity_suite(name):
    r = check_identity(name, 16, 16)
    ok = r.passed and r.max_residual <= r.tail_bound
    if name != "cstar_dc":
        ok = ok and r.tail_bound <= 1e-4
    else:
        ok = ok and r.verdict == "exact-pass"
    record(f"2.{name}", name, ok, f"{r.verdict}, residual {r.max_residual:.3g} <= tail {r.tail_bound:.3g}")


# 3 ------------------------------------------------------------------- norm study

NORM_NS = (16, 64, 256, 1024, 4096)


@pytest.fixture(scope="module")
def norms():
    return [operator_norm("cesaro", N).norm for N in NORM_NS]


def test_norm_monotone(norms):
    ok = all(a <= b for a, b in zip(norms, norms[1:]))
    record("3.a", "nondecreasing", ok, " ".join(f"{v:.5f}" for v in norms))


def test_norm_below_two(norms):
    record("3.b", "<= 2 + 1e-9", max(norms) <= 2 + 1e-9, f"max {max(norms):.6f}")


def test_norm_floor(norms):
    v = norms[-1]
    record("3.c", "floor N=4096", v >= 1.85, f"{v:.5f} (required >= 1.85)")


def test_sharpness_floor():
    r = sharpness_ratio(0.55, 10**6)
    record("3.d", "sharpness(0.55, 1e6)", r >= 1.7, f"{r:.5f}")


# 4 --------------------------------------------------------------- hyponormality

def test_hyponormal_form_nonnegative():
    rng = random.Random(SEED)
    worst = np.inf
    for _ in range(10_000):
        m = rng.randint(1, 256)
        a = np.array([complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(m)])
        worst = min(worst, hyponormal_form(a).lo)
    record("4", "hyponormal 1e4 vectors", worst >= -1e-12, f"min lower bound {worst:.3e}")


# 5 ------------------------------------------------------------ spectrum evidence

def test_eigen_residual_grid():
    res = {lam: adjoint_eigen_residual(lam, 10**5) for lam in disk_grid(0.9, 25)}
    worst = max(res, key=res.get)
    n_ok = sum(v < 1e-3 for v in res.values())
    record("5.a", "disk grid < 1e-3 at K=1e5", n_ok == len(res),
           f"{n_ok}/{len(res)} below; worst {res[worst]:.3g} at lambda={worst:.3g}")


def test_eigen_residual_monotone():
    bad = []
    for lam in disk_grid(0.9, 25):
        r = [adjoint_eigen_residual(lam, K) for K in (10**3, 10**4, 10**5)]
        if not (r[0] >= r[1] >= r[2]):
            bad.append(lam)
    record("5.b", "decreasing in K", not bad, f"{25 - len(bad)}/25 monotone")


@pytest.mark.parametrize("n", [0, 1, 2])
def test_divergence_witness(n):
    w = point_spectrum_divergence_witness(n, 2 * 10**6)
    ratio = w[-1] / w[0]
    inc = all(a < b for a, b in zip(w[:: 10_000], w[10_000:: 10_000]))
    record(f"5.c{n}", f"witness n={n}", ratio > 1e3 and inc, f"last/first {ratio:.3g} at N=2e6")


# 6 ----------------------------------------------------------------- square roots

@pytest.mark.parametrize("sign", [1, -1])
def test_constant_roots_double(sign):
    r = verify_root(closed_form_root(SignPattern.constant(sign, 24)), tol=1e-8)
    record(f"6.a{'+' if sign > 0 else '-'}", f"sigma={'+' if sign > 0 else '-'}1 double", r.passed,
           f"residual {r.max_residual:.3g}")


def test_random_roots_double():
    rng = random.Random(SEED)
    res = [verify_root(closed_form_root(SignPattern.sample(24, rng)), tol=1e-8).max_residual for _ in range(20)]
    n_ok = sum(x <= 1e-8 for x in res)
    record("6.b", "20 random sigma double", n_ok == 20, f"{n_ok}/20 <= 1e-8; worst {max(res):.3g}")


def test_all_roots_256_bits():
    rng = random.Random(SEED)
    pats = [SignPattern.constant(1, 24), SignPattern.constant(-1, 24)] + [SignPattern.sample(24, rng) for _ in range(20)]
    res = [verify_root(closed_form_root(s, prec=256), tol=1e-20).max_residual for s in pats]
    record("6.c", "22 patterns at 256 bits", max(res) <= 1e-20, f"worst {max(res):.3g}")


def test_series_root_matches_plus_root():
    K, N = 200, 24
    d = np.max(np.abs(series_root(K, N).to_numpy() - closed_form_root(SignPattern.constant(1, N)).to_numpy()))
    tail = float(sqrt_series_tail(K))
    record("6.d", "series K=200 vs sigma=+1", d <= tail, f"max entry gap {d:.3g} <= {tail:.3g}")


def test_sqrt_coefficients_displayed():
    ok = sqrt_series_coefficients(5) == [1, F(-1, 2), F(-1, 8), F(-1, 16), F(-5, 128), F(-7, 256)]
    record("6.e", "six coefficients", ok, "1, -1/2, -1/8, -1/16, -5/128, -7/256")


# 7 ------------------------------------------------------------------ summability

def test_grandi():
    rep = summability.summarize(summability.series_terms("grandi", 10**5), "cesaro", 1)
    ok = rep.verdict == "converged" and abs(rep.limit - 0.5) <= 1e-4
    record("7.a", "Grandi (C,1)", ok, f"{rep.verdict} {rep.limit}")


def test_alternating_integers():
    rep = summability.summarize(summability.series_terms("alt-power:1", 10**5), "cesaro", 2)
    ok = rep.verdict == "converged" and abs(rep.limit - 0.25) <= 1e-2
    record("7.b", "1-2+3-4 (C,2)", ok, f"{rep.verdict} {rep.limit}")


@pytest.mark.parametrize("p", [0, 1, 2, 3])
def test_alternating_power_references(p):
    ref = summability.alternating_power_reference(p)
    formula = F(2 ** (p + 1) - 1, p + 1) * bernoulli(p + 1)
    rep = summability.summarize(summability.series_terms(f"alt-power:{p}", 10**5), "cesaro", p + 1)
    ok = ref == formula and rep.verdict == "converged" and abs(rep.limit - float(ref)) <= 1e-2
    record(f"7.c{p}", f"alt-power p={p}", ok, f"reference {ref}, detected {rep.limit}")


def test_holder_cesaro_agree():
    t = summability.series_terms("alt-power:1", 10**5)
    a, b = summability.summarize(t, "cesaro", 2), summability.summarize(t, "holder", 2)
    ok = a.limit is not None and b.limit is not None and abs(a.limit - b.limit) <= 1e-3
    record("7.d", "(H,2) vs (C,2)", ok, f"{a.limit} vs {b.limit}")


# 8 ---------------------------------------------------------------------- Fourier

def test_fejer_kernel_positive_unit_mass():
    t = np.linspace(-np.pi, np.pi, 10_000)
    worst_min, worst_mass = np.inf, 0.0
    for N in range(0, 257):
        worst_min = min(worst_min, float(fejer_kernel(N, t).min()))
        M = 8 * (N + 1)
        worst_mass = max(worst_mass, abs(fejer_kernel(N, 2 * np.pi * np.arange(M) / M).mean() - 1))
    record("8.a", "kernel >= 0, unit mean", worst_min >= 0 and worst_mass < 1e-12,
           f"min {worst_min:.3g}, mass error {worst_mass:.3g}")


def test_fejer_abs_convergence():
    rows = convergence_report(builtin("abs", 8 * 257), (16, 64, 256), ("sup",))
    e = [r["error"] for r in rows]
    record("8.b", "|theta| sup errors", e[0] > e[1] > e[2] and e[2] < 0.05, " ".join(f"{x:.4g}" for x in e))


# 9 ------------------------------------------------------------------------- l^p

@pytest.mark.parametrize("p", [1.5, 3, 4])
def test_lp_bounds(p):
    rep = lp_bound_suite(p, samples=1000, seed=SEED)
    record(f"9.{p}", f"p={p}", rep.passed,
           f"C: {rep.max_ratio_c:.4f} <= {rep.q:.4f}; I-C: {rep.max_ratio_i_minus_c:.4f} <= {rep.bound:.4f}")


def test_lp_bound_at_two():
    record("9.two", "bound(2) = 1", lp_bound(2) == 1, f"{lp_bound(2)!r}")


# 10 ------------------------------------------------------------------------ Hardy

def test_semigroup_formulas():
    rng = random.Random(SEED)
    polys = random_polys(rng, 6, 5) + [[1], [0, 1], [0, 0, 0, 0, 0, 1]]
    worst_a = worst_b = 0.0
    for z in hardy.DISK_POINTS:
        for f in polys:
            worst_a = max(worst_a, hardy.adjoint_semigroup_check(f, z).residual)
            worst_b = max(worst_b, hardy.cesaro_flow_check(f, z).residual)
    record("10.a", "semigroup for C*", worst_a < 1e-8, f"worst {worst_a:.3g}")
    record("10.b", "flow for C", worst_b < 1e-8, f"worst {worst_b:.3g}")


def test_intertwining():
    rng = random.Random(SEED)
    polys = random_polys(rng, 6, 5) + [[1], [1, -1]]
    checks = [hardy.intertwining_check(f, z, 10**4) for z in hardy.DISK_POINTS for f in polys]
    n_ok = sum(c.passed for c in checks)
    worst = max(c.residual / c.bound for c in checks)
    record("10.c", "intertwining K=1e4", n_ok == len(checks), f"{n_ok}/{len(checks)}; max residual/bound {worst:.4f}")


def test_deddens_exact():
    ok = all(a == b and isinstance(a, Fraction)
             for alpha in (F(1, 2), F(1, 3), F(2, 7), F(9, 10))
             for a, b in (hardy.deddens_interpolation(alpha, n) for n in range(1, 30)))
    record("10.d", "Deddens interpolation exact", ok, "alpha in {1/2, 1/3, 2/7, 9/10}, n <= 29")


# 11 ------------------------------------------------------------------- continuous

def test_continuous_operator():
    t0 = time.perf_counter()
    mono = max(continuous.c1_eigen_residual(1 / (1 + b), 128) for b in (0, 0.25, 0.5, 1, 2, 3 + 1j))
    rng = random.Random(SEED)

    def poly(c):
        return lambda x: np.polyval(c[::-1], np.asarray(x, dtype=float)) + 0j

    iso = max(continuous.isometry_check(poly(f), 128)[2] for f in random_polys(rng, 20, 6))
    res = max(continuous.resolvent_check(lam, poly(f), 128) for lam in (3, -1) for f in random_polys(rng, 10, 4))
    elapsed = time.perf_counter() - t0
    record("11.a", "monomial eigen-relation", mono < 1e-8, f"worst {mono:.3g}")
    record("11.b", "isometry of I - C1*", iso < 1e-8, f"worst relative {iso:.3g}")
    record("11.c", "resolvent", res < 1e-6, f"worst {res:.3g}")
    record("11.d", "runtime < 60 s", elapsed < 60, f"{elapsed:.1f} s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

"""Command-line front end: ``cesaro sum | verify | matrix | spectrum``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import continuous, hardy, matrices, roots, spectral, summability
from .sequences import hyponormal_form

DEFAULT_SEED = 0x5EED
SUITES = ("identities", "hyponormal", "roots", "hardy", "continuous", "all")
STUDIES = ("norm-growth", "eigen-residual", "sharpness", "lp-bounds")


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    output: str | None = None
    format: str = "json"


def parse_number(text: str):
    """'3' -> int, '1/2' -> Fraction, '0.25' -> float, '0.9+0.3j' -> complex."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    if "/" in text:
        return Fraction(text)
    if "j" in text:
        return complex(text.replace(" ", ""))
    return float(text)


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, complex):
        return x.real if x.imag == 0 else [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=1, sort_keys=True) + "\n"


# --------------------------------------------------------------------- sum


def cmd_sum(args, cfg: RunConfig) -> int:
    try:
        terms = summability.series_terms(args.series, args.N)
    except (ValueError, OSError, ZeroDivisionError, OverflowError) as exc:
        print(f"error: bad series source: {exc}", file=sys.stderr)
        return 1
    order = args.order
    if args.method == "euler":
        order = parse_number(args.lam) if args.lam else Fraction(1, 2)
    diag = None
    if args.method == "hausdorff":
        if not args.diag:
            print("error: --diag is required for the hausdorff method", file=sys.stderr)
            return 1
        diag = summability.series_terms(args.diag, args.N)
    rep = summability.summarize(terms, args.method, order, tol=args.tol, window=args.window, diag=diag)
    out = rep.to_dict(tail=args.show)
    out["config"].update({"series": args.series, "N": args.N, "seed": cfg.seed})
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "mean"])
        start = len(rep.means) - args.show
        for i, m in enumerate(rep.means[-args.show:]):
            w.writerow([start + i, format(complex(m).real, ".17g") if complex(m).imag == 0 else str(complex(m))])
        w.writerow(["verdict", rep.verdict])
        w.writerow(["limit", "" if rep.limit is None else format(complex(rep.limit).real, ".17g")])
        _emit(buf.getvalue(), args.output)
    else:
        _emit(_dumps(out), args.output)
    return 0 if rep.verdict == "converged" else 2


# ------------------------------------------------------------------ verify


def _report(name, passed, **fields):
    return {"check": name, "passed": bool(passed), **fields}


def suite_identities(N, tol, seed):
    out = []
    for idn in ("w_squared", "c_wdw", "l_ccstar", "i_minus_c", "hausdorff_commute", "deddens_commute",
                "column_shift", "euler_semigroup", "range", "eigenvectors"):
        params = {"seed": seed} if idn in ("hausdorff_commute", "column_shift") else {}
        if idn == "deddens_commute":
            for a in (Fraction(1, 2), Fraction(1, 3)):
                r = matrices.check_identity(idn, N, alpha=a)
                out.append(_report(idn, r.passed, **r.to_dict()))
            continue
        r = matrices.check_identity(idn, N, **params)
        out.append(_report(idn, r.passed, **r.to_dict()))
    for idn in ("h_bc", "cstar_dc", "cstar_ac"):
        r = matrices.check_identity(idn, 16, 16, tol=tol)
        out.append(_report(idn, r.passed, **r.to_dict()))
    return out


def suite_hyponormal(samples, seed, max_support=256):
    rng = random.Random(seed)
    worst = math.inf
    for _ in range(samples):
        m = rng.randint(1, max_support)
        a = np.array([complex(rng.random(), rng.random()) for _ in range(m)])
        worst = min(worst, hyponormal_form(a).lo)
    return [_report("hyponormal_form", worst >= -1e-12, samples=samples, min_lower_bound=worst,
                    max_support=max_support)]


def suite_roots(N, seed, prec, count=20):
    tol = 1e-8 if prec is None else 1e-20
    rng = random.Random(seed)
    patterns = [roots.SignPattern.constant(1, N), roots.SignPattern.constant(-1, N)]
    patterns += [roots.SignPattern.sample(N, rng) for _ in range(count)]
    out = []
    for s in patterns:
        r = roots.verify_root(roots.closed_form_root(s, N, prec=prec), N, tol=tol)
        out.append(_report("root_squared", r.passed, sigma=str(s), N=N, precision=prec or 53,
                           residual=r.max_residual, tol=tol))
    return out


def suite_hardy(K=10_000):
    out = []
    polys = [[1], [0, 1], [0, 0, 1], [1, -1], [2, 0, -1, 0.5], [1, 2, -1, 0.5, 3, -2]]
    for z in hardy.DISK_POINTS:
        for f in polys:
            a = hardy.adjoint_semigroup_check(f, z)
            b = hardy.cesaro_flow_check(f, z)
            c = hardy.intertwining_check(f, z, K)
            out.append(_report("adjoint_semigroup", a.residual <= 1e-8, z=z, f=f, residual=a.residual))
            out.append(_report("cesaro_flow", b.residual <= 1e-8, z=z, f=f, residual=b.residual))
            out.append(_report("intertwining", c.passed, z=z, f=f, residual=c.residual, bound=c.bound))
    for a in (Fraction(1, 2), Fraction(1, 3), Fraction(9, 10)):
        ok = all(x == y for x, y in (hardy.deddens_interpolation(a, n) for n in range(1, 12)))
        out.append(_report("deddens_interpolation", ok, alpha=a))
    return out


def _polys(rng, count, degree):
    return [[rng.uniform(-1, 1) for _ in range(degree + 1)] for _ in range(count)]


def suite_continuous(seed, M=128):
    out = []
    for b in (0, 0.25, 0.5, 1, 2, 3 + 1j):
        lam = 1 / (1 + b)
        r = continuous.c1_eigen_residual(lam, M)
        out.append(_report("c1_monomial", r < 1e-8, b=b, residual=r))
    rng = random.Random(seed)
    for c in _polys(rng, 5, 6):
        _, _, rel = continuous.isometry_check(lambda x, c=c: np.polyval(c, x), M)
        out.append(_report("isometry", rel < 1e-8, coefficients=c, relative_difference=rel))
    for lam in (3, -1):
        for c in _polys(rng, 3, 4):
            r = continuous.resolvent_check(lam, lambda x, c=c: np.polyval(c, x), M)
            out.append(_report("resolvent", r < 1e-6, lam=lam, coefficients=c, residual=r))
    return out


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.suite not in SUITES:
        print(f"error: unknown suite {args.suite!r}; expected one of {', '.join(SUITES)}", file=sys.stderr)
        return 1
    wanted = SUITES[:-1] if args.suite == "all" else (args.suite,)
    prec = roots.default_precision()
    reports = []
    for s in wanted:
        if s == "identities":
            reports += suite_identities(args.N or 64, args.tol, cfg.seed)
        elif s == "hyponormal":
            reports += suite_hyponormal(args.samples, cfg.seed)
        elif s == "roots":
            reports += suite_roots(args.N or 24, cfg.seed, prec)
        elif s == "hardy":
            reports += suite_hardy()
        elif s == "continuous":
            reports += suite_continuous(cfg.seed)
    conf = {"command": "verify", "suite": args.suite, "N": args.N, "tol": args.tol, "seed": cfg.seed,
            "precision_bits": prec}
    for r in reports:
        r["config"] = conf
    _emit(_dumps(reports), args.output)
    return 0 if all(r["passed"] for r in reports) else 2


# ------------------------------------------------------------------ matrix


def cmd_matrix(args, cfg: RunConfig) -> int:
    params = {}
    if args.lam is not None:
        params["lam"] = parse_number(args.lam)
    if args.alpha is not None:
        params["alpha"] = parse_number(args.alpha)
    if args.r is not None:
        params["r"] = args.r
    if args.diag is not None:
        params["diag"] = [parse_number(x) for x in args.diag.split(",")]
    if args.g is not None:
        params["g"] = [parse_number(x) for x in args.g.split(",")]
    try:
        mat = matrices.build(args.name, args.N, **params)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = matrices.to_csv(mat) if args.format == "csv" else matrices.to_json(mat)
    try:
        _emit(text, args.output)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------- spectrum


def _int_list(text):
    return [int(float(x)) for x in text.split(",") if x.strip()]


def lambda_grid(text: str) -> list[complex]:
    """``disk:h`` is the lattice 1 + h(a + ib) inside |1 - lambda| <= 0.9;
    ``ring:count`` the 25-point centre-and-rings grid; otherwise a comma list."""
    if text.startswith("disk:"):
        h = float(text[5:])
        if h <= 0:
            raise ValueError("grid spacing must be positive")
        n = int(0.9 / h)
        pts = [1 + h * complex(a, b) for a in range(-n, n + 1) for b in range(-n, n + 1)]
        return [p for p in pts if abs(1 - p) <= 0.9 + 1e-12]
    if text.startswith("ring:"):
        return spectral.disk_grid(0.9, int(text[5:]))
    return [complex(parse_number(x)) for x in text.split(",")]


def cmd_spectrum(args, cfg: RunConfig) -> int:
    rows = []
    try:
        if args.study == "norm-growth":
            for n in _int_list(args.N or "16,64,256,1024,4096"):
                rows.append(("cesaro", n, spectral.operator_norm("cesaro", n).norm))
        elif args.study == "eigen-residual":
            Ks = _int_list(args.N or "100000")
            for lam in lambda_grid(args.lambda_grid):
                for K in Ks:
                    rows.append((str(lam), K, spectral.adjoint_eigen_residual(lam, K)))
        elif args.study == "sharpness":
            for a in [float(x) for x in args.a.split(",")]:
                for n in _int_list(args.N or "1000000"):
                    rows.append((a, n, spectral.sharpness_ratio(a, n)))
        elif args.study == "lp-bounds":
            for p in [float(x) for x in args.p.split(",")]:
                rep = spectral.lp_bound_suite(p, args.samples, cfg.seed)
                rows.append((f"p={p}:ratio_C", rep.samples, rep.max_ratio_c))
                rows.append((f"p={p}:q", rep.samples, rep.q))
                rows.append((f"p={p}:ratio_I-C", rep.samples, rep.max_ratio_i_minus_c))
                rows.append((f"p={p}:bound", rep.samples, rep.bound))
                rows.append((f"p={p}:passed", rep.samples, int(rep.passed)))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["parameter", "N", "value"])
    for p, n, v in rows:
        w.writerow([p, n, format(v, ".17g") if isinstance(v, float) else v])
    _emit(buf.getvalue(), args.output)
    return 0


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cesaro", description=__doc__)
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sum", help="sum a series by a chosen method")
    s.add_argument("--series", required=True, help="grandi | alt-power:p | expr:<n-expression> | file.csv/.json")
    s.add_argument("--method", default="cesaro", choices=summability.METHODS)
    s.add_argument("--order", type=int, default=1)
    s.add_argument("--lambda", dest="lam", help="Euler parameter (e.g. 1/2)")
    s.add_argument("--diag", help="series source for the Hausdorff diagonal")
    s.add_argument("-N", type=int, default=100_000)
    s.add_argument("--tol", type=float, default=1e-4)
    s.add_argument("--window", type=int, default=8)
    s.add_argument("--show", type=int, default=10, help="number of trailing means to print")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--output")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", default="all")
    v.add_argument("-N", type=int, default=None)
    v.add_argument("--tol", type=float, default=0.0)
    v.add_argument("--samples", type=int, default=10_000)
    v.add_argument("--output")

    m = sub.add_parser("matrix", help="export a matrix truncation")
    m.add_argument("name", choices=matrices.MATRIX_NAMES)
    m.add_argument("-N", type=int, default=8)
    m.add_argument("--format", choices=("json", "csv"), default="csv")
    m.add_argument("--lambda", dest="lam")
    m.add_argument("--alpha")
    m.add_argument("--r", type=int)
    m.add_argument("--diag", help="comma-separated diagonal")
    m.add_argument("--g", help="comma-separated coefficients g_0, g_1, ...")
    m.add_argument("--output")

    p = sub.add_parser("spectrum", help="spectral studies as CSV")
    p.add_argument("study", choices=STUDIES)
    p.add_argument("--N", "-N", dest="N", help="comma-separated sizes")
    p.add_argument("--lambda-grid", default="ring:25")
    p.add_argument("--a", default="0.55,0.75,1.0")
    p.add_argument("--p", default="1.5,2,3,4")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--output")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = RunConfig(args.command, {k: v for k, v in vars(args).items() if k not in ("command", "seed")},
                    args.seed, getattr(args, "output", None))
    handler = {"sum": cmd_sum, "verify": cmd_verify, "matrix": cmd_matrix, "spectrum": cmd_spectrum}[args.command]
    return handler(args, cfg)


if __name__ == "__main__":
    raise SystemExit(main())

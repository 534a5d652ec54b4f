"""Detected limits of 1^p - 2^p + 3^p - ... under (C, r) and (H, r), r = 1..4,
next to the Bernoulli reference value for (C, p+1)."""

import argparse
import csv
import sys
from dataclasses import dataclass

from cesaro.summability import alternating_power_reference, series_terms, summarize


@dataclass
class Config:
    powers: tuple = (0, 1, 2, 3)
    orders: tuple = (1, 2, 3, 4)
    N: int = 100_000
    tol: float = 1e-4


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-N", type=int, default=Config.N)
    ap.add_argument("--tol", type=float, default=Config.tol)
    args = ap.parse_args(argv)
    cfg = Config(N=args.N, tol=args.tol)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["p", "method", "r", "verdict", "limit", "reference"])
    for p in cfg.powers:
        terms = series_terms(f"alt-power:{p}", cfg.N)
        ref = alternating_power_reference(p)
        for method in ("cesaro", "holder"):
            for r in cfg.orders:
                rep = summarize(terms, method, r, tol=cfg.tol)
                lim = "" if rep.limit is None else f"{float(rep.limit):.10g}"
                w.writerow([p, method, r, rep.verdict, lim, ref])


if __name__ == "__main__":
    main()

"""Finite-section norms of the Cesàro matrix and the (n+1)^-a lower-bound family.

Writes CSV rows (kind, parameter, N, value). The section norms creep toward 2
very slowly; the suffix-sum ratios show how close the test family gets.
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from cesaro.spectral import operator_norm, sharpness_ratio


@dataclass
class Config:
    sizes: tuple = (16, 64, 256, 1024, 4096, 16384)
    exponents: tuple = (1.0, 0.75, 0.6, 0.55, 0.52)
    ratio_N: int = 10**6


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default=",".join(map(str, Config.sizes)))
    ap.add_argument("--ratio-N", type=int, default=Config.ratio_N)
    args = ap.parse_args(argv)
    cfg = Config(sizes=tuple(int(s) for s in args.sizes.split(",")), ratio_N=args.ratio_N)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["kind", "parameter", "N", "value"])
    for N in cfg.sizes:
        est = operator_norm("cesaro", N)
        w.writerow(["section_norm", "", N, f"{est.norm:.12f}"])
    for a in cfg.exponents:
        w.writerow(["suffix_ratio", a, cfg.ratio_N, f"{sharpness_ratio(a, cfg.ratio_N):.12f}"])
        w.writerow(["suffix_ratio_lower_bound", a, "inf", f"{1 / a:.12f}"])


if __name__ == "__main__":
    main()

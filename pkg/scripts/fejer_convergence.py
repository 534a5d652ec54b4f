"""Fejér-mean errors for the built-in circle functions, plus the partial-sum
overshoot on the sawtooth."""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from cesaro.fourier import builtin, convergence_report, fejer_mean, partial_sum, report_to_csv


@dataclass
class Config:
    functions: tuple = ("abs", "tent", "cos7", "step", "sawtooth")
    Ns: tuple = (4, 16, 64, 256)
    M: int = 1 << 14


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M", type=int, default=Config.M)
    args = ap.parse_args(argv)
    cfg = Config(M=args.M)

    rows = []
    for name in cfg.functions:
        f = builtin(name, cfg.M)
        for row in convergence_report(f, cfg.Ns):
            rows.append({"function": name, **row})
    sys.stdout.write(report_to_csv(rows))

    saw = builtin("sawtooth", cfg.M)
    print("\n# sawtooth maxima: partial sum vs Fejér mean (pi = %.6f)" % np.pi)
    for N in cfg.Ns:
        s = partial_sum(saw, N).samples.real.max()
        m = fejer_mean(saw, N).samples.real.max()
        print(f"# N={N:4d}  max S_N = {s:.6f}  max sigma_N = {m:.6f}")


if __name__ == "__main__":
    main()

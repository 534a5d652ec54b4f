"""Residual of (A^sigma)^2 - C against working precision and size.

Mixed sign patterns have entries near 2^N, so 53-bit storage cannot square
back to C; the constant patterns can. Rows: pattern, N, bits, residual.
"""

import argparse
import csv
import random
import sys
from dataclasses import dataclass

from cesaro.roots import SignPattern, block_norm_growth, closed_form_root, verify_root


@dataclass
class Config:
    sizes: tuple = (8, 16, 24, 32)
    bits: tuple = (None, 106, 256)
    random_patterns: int = 3
    seed: int = 0x5EED


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=Config.seed)
    args = ap.parse_args(argv)
    cfg = Config(seed=args.seed)
    rng = random.Random(cfg.seed)
    Nmax = max(cfg.sizes)
    patterns = [SignPattern.constant(1, Nmax), SignPattern.constant(-1, Nmax)]
    patterns += [SignPattern.sample(Nmax, rng) for _ in range(cfg.random_patterns)]

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["pattern", "N", "bits", "residual"])
    for s in patterns:
        for N in cfg.sizes:
            for b in cfg.bits:
                r = verify_root(closed_form_root(s, N, prec=b), N)
                w.writerow([str(s)[:N], N, b or 53, f"{r.max_residual:.3e}"])

    print("\n# block spectral norms (evidence only)")
    for s in patterns[:1] + patterns[2:3]:
        for n, v in block_norm_growth(s, [4, 8, 16, 32]):
            print(f"# {str(s)[:8]}... N={n:3d} norm={v:.6g}")


if __name__ == "__main__":
    main()

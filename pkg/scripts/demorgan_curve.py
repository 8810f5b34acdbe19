#!/usr/bin/env python3
"""Sweep the total De Morgan deviation of <dombi_or(lambda), dombi_and(1)>.

Writes a CSV curve (lambda, deviation) showing the blow-up toward the
drastic disjunction at small lambda, the exact zero at lambda = 1 and the
approach to the 1/12 asymptote at the max disjunction.

Usage: python scripts/demorgan_curve.py [out.csv]
"""

import sys

import numpy as np

from distclosure import demorgan_deviation


def main():
    lams = np.concatenate([
        np.geomspace(0.05, 0.9, 12),
        [1.0],
        np.geomspace(1.1, 200.0, 18),
    ])
    rows = [(lam, demorgan_deviation(lam)) for lam in lams]
    out = sys.argv[1] if len(sys.argv) > 1 else None
    lines = ["lambda,deviation"] + [f"{lam:.6g},{v:.10g}" for lam, v in rows]
    text = "\n".join(lines)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {out}")
    else:
        print(text)
    print(f"\nasymptote 1/12 = {1 / 12:.10f}; deviation at lambda=200: {rows[-1][1]:.10f}")


if __name__ == "__main__":
    main()

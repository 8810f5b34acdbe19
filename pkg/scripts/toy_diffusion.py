#!/usr/bin/env python3
"""Trace the n-diffusion of the bundled toy network.

Prints per-power asymmetry and community structure, and optionally writes
the hierarchy file consumed by plotting tools.

Usage: python scripts/toy_diffusion.py [n_max] [hierarchy_out]
"""

import sys

from distclosure import diffusion_trace, toy_network
from distclosure.io_formats import write_hierarchy


def main():
    n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 40
    toy = toy_network()
    trace = diffusion_trace(toy, n_max)
    print(f"{'n':>3}  {'communities':>11}  {'asymmetry':>12}  partition")
    for k in range(n_max):
        part = trace.partitions[k]
        groups = {}
        for lab, cid in part.items():
            groups.setdefault(cid, []).append(lab)
        desc = " | ".join(",".join(g) for g in groups.values())
        print(f"{k + 1:>3}  {trace.community_counts[k]:>11}  "
              f"{trace.asymmetry[k]:>12.6f}  {desc}")
    if trace.dissolve_n:
        print(f"\nall-singleton partition first reached at n={trace.dissolve_n}")
    if len(sys.argv) > 2:
        write_hierarchy(trace, sys.argv[2])
        print(f"hierarchy written to {sys.argv[2]}")


if __name__ == "__main__":
    main()

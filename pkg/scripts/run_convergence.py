#!/usr/bin/env python3
"""Gaussian-pulse convergence study.

Runs the smooth periodic Gaussian problem on a sequence of nested grids
(finest grid = reference), writes one snapshot per grid and a text table of
point-value L1 errors and observed orders to the output directory.
"""

import sys

from activeflux.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/convergence"
    sys.exit(main([
        "convergence", "--problem", "gaussian",
        "--grids", "32,64,128,256", "--t-end", "0.05",
        "--cfl", "0.2", "--out", out,
    ]))

#!/usr/bin/env python3
"""Spherical shock tube, with and without limiting.

Both runs use cfl 0.05.  The initial discontinuity is sampled pointwise
and cut obliquely by the grid, so the one-sided derivatives next to it
are proportional to the jump over the mesh width (and the limiter's hat
end slopes double them); the scheme has no positivity enforcement, so
larger Courant numbers drive low-pressure-side point values to negative
pressure within the first steps.
"""

import sys

from activeflux.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/sod"
    for limiter, cfl in (("off", "0.05"), ("on", "0.05")):
        code = main([
            "run", "--problem", "sod", "--nx", "100", "--ny", "100",
            "--cfl", cfl, "--t-end", "0.2", "--limiter", limiter,
            "--out", f"{out}_{'limited' if limiter == 'on' else 'unlimited'}",
        ])
        if code:
            sys.exit(code)
    sys.exit(0)

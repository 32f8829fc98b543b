#!/usr/bin/env python3
"""Shear-layer (Kelvin-Helmholtz) run triggered by an acoustic wave.

200x40 grid, Mach number 1/20, no limiting, cfl 0.15, to t = 3.
"""

import sys

from activeflux.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/kh"
    sys.exit(main([
        "run", "--problem", "kh", "--nx", "200", "--ny", "40",
        "--cfl", "0.15", "--t-end", "3", "--limiter", "off",
        "--mach", "0.05", "--out", out,
    ]))

#!/usr/bin/env python3
"""Four-quadrant Riemann problems (configurations 6, 11, 12, 16).

Each configuration runs on a 100x100 grid with limiting at cfl 0.05 and
writes a binary snapshot of the final state.
"""

import sys

from activeflux.cli import main

CONFIGS = ("laxliu6", "laxliu11", "laxliu12", "laxliu16")

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/riemann"
    names = sys.argv[2:] or CONFIGS
    for name in names:
        code = main([
            "run", "--problem", name, "--nx", "100", "--ny", "100",
            "--cfl", "0.05", "--limiter", "on", "--out", out,
        ])
        if code:
            sys.exit(code)
    sys.exit(0)

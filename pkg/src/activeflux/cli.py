"""Command-line driver.

Subcommands: run, convergence, norms, extract.  A plain ``key = value``
config file can preset any ``run`` flag; explicit flags override it.
Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .euler import GasParams, InvalidStateError
from .problems import PROBLEM_NAMES, ConfigError, make_problem
from .snapshots import (FormatError, convergence_orders, l1_point_error,
                        line_cut, radial_scatter, read_snapshot,
                        snapshot_from_field, write_csv, write_snapshot)
from .timestepping import RunParams, run

USAGE_ERROR = 2
NUMERICAL_ERROR = 3


def _read_config(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="activeflux",
                                description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one simulation and write snapshots")
    r.add_argument("--problem", help="one of: " + ", ".join(PROBLEM_NAMES))
    r.add_argument("--nx", type=int)
    r.add_argument("--ny", type=int)
    r.add_argument("--cfl", type=float)
    r.add_argument("--t-end", type=float, dest="t_end")
    r.add_argument("--limiter", choices=("on", "off"))
    r.add_argument("--out")
    r.add_argument("--format", choices=("bin", "csv"), dest="fmt")
    r.add_argument("--mach", type=float,
                   help="shear Mach number for the Kelvin-Helmholtz setup")
    r.add_argument("--config", help="file of 'key = value' presets")

    c = sub.add_parser("convergence",
                       help="grid-refinement study against the finest grid")
    c.add_argument("--problem", default="gaussian")
    c.add_argument("--grids", default="32,64,128,256",
                   help="comma-separated grid sizes, finest is the reference")
    c.add_argument("--t-end", type=float, default=0.05, dest="t_end")
    c.add_argument("--cfl", type=float, default=0.2)
    c.add_argument("--out", required=True)

    n = sub.add_parser("norms", help="L1 point-value error between snapshots")
    n.add_argument("--coarse", required=True)
    n.add_argument("--reference", required=True)

    e = sub.add_parser("extract", help="radial scatter or line-cut data")
    e.add_argument("--snapshot", required=True)
    e.add_argument("--mode", choices=("radial", "line"), required=True)
    e.add_argument("--at", type=float,
                   help="line mode: x coordinate of the vertical cut")
    return p


_RUN_DEFAULTS = {"nx": 100, "ny": 100, "cfl": 0.2, "limiter": "on",
                 "out": "out", "fmt": "bin", "mach": None}
_RUN_CASTS = {"nx": int, "ny": int, "cfl": float, "t_end": float,
              "mach": float}


def _resolve_run_options(args) -> dict:
    opts = dict(_RUN_DEFAULTS, t_end=None, problem=None)
    if args.config:
        cfg = _read_config(args.config)
        if "format" in cfg:
            cfg["fmt"] = cfg.pop("format")
        unknown = set(cfg) - set(opts)
        if unknown:
            raise ConfigError("unknown config keys: " + ", ".join(sorted(unknown)))
        for key, raw in cfg.items():
            cast = _RUN_CASTS.get(key, str)
            try:
                opts[key] = cast(raw)
            except ValueError:
                raise ConfigError(f"bad value for {key}: {raw!r}") from None
    for key in opts:
        flag = getattr(args, key, None)
        if flag is not None:
            opts[key] = flag
    if opts["problem"] is None:
        raise ConfigError("--problem is required (flag or config file)")
    if opts["limiter"] not in ("on", "off"):
        raise ConfigError(f"limiter must be 'on' or 'off', got {opts['limiter']!r}")
    if opts["fmt"] not in ("bin", "csv"):
        raise ConfigError(f"format must be 'bin' or 'csv', got {opts['fmt']!r}")
    return opts


def _cmd_run(args) -> int:
    opts = _resolve_run_options(args)
    gas = GasParams()
    if opts["mach"] is not None:
        problem = make_problem(opts["problem"], mach=opts["mach"])
    else:
        problem = make_problem(opts["problem"])
    t_end = opts["t_end"] if opts["t_end"] is not None else problem.t_end
    limiter = opts["limiter"] == "on"
    out = Path(opts["out"])
    out.mkdir(parents=True, exist_ok=True)
    params = RunParams(cfl=opts["cfl"], t_end=t_end, limiter_on=limiter)

    def sink(field, t):
        snap = snapshot_from_field(field, t, gas.gamma, limiter)
        stem = out / f"{opts['problem']}_{opts['nx']}x{opts['ny']}_t{t:.6f}"
        if opts["fmt"] == "bin":
            write_snapshot(stem.parent / (stem.name + ".afx"), snap)
        else:
            write_csv(stem, snap)

    _, diag = run(problem, problem.spec(opts["nx"], opts["ny"]), params,
               sink=sink, gas=gas, progress=True)
    print(f"done: {diag.steps} steps to t={diag.t:.6g}, "
          f"rho in [{diag.min_rho:.6g}, {diag.max_rho:.6g}], "
          f"p in [{diag.min_p:.6g}, {diag.max_p:.6g}]")
    return 0


def _cmd_convergence(args) -> int:
    try:
        grids = sorted({int(g) for g in args.grids.split(",")})
    except ValueError:
        raise ConfigError(f"bad --grids list: {args.grids!r}") from None
    if len(grids) < 2:
        raise ConfigError("--grids needs at least two sizes")
    gas = GasParams()
    problem = make_problem(args.problem)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    params = RunParams(cfl=args.cfl, t_end=args.t_end, limiter_on=False)
    snaps = {}
    for n in grids:
        run(problem, problem.spec(n, n), params,
            sink=lambda f, t, n=n: snaps.__setitem__(
                n, snapshot_from_field(f, t, gas.gamma, False)),
            gas=gas, progress=True)
        write_snapshot(out / f"{args.problem}_{n}x{n}.afx", snaps[n])
    reference = snaps[grids[-1]]
    reports = convergence_orders(
        [l1_point_error(snaps[n], reference) for n in grids[:-1]])
    lines = ["# nx l1_rho l1_rhou l1_rhov l1_e order_rho order_rhou order_rhov order_e"]
    for rep in reports:
        order = rep.order if rep.order is not None else [float("nan")] * 4
        lines.append(" ".join([str(rep.nx)]
                              + [f"{v:.8e}" for v in rep.l1]
                              + [f"{v:.4f}" for v in order]))
    text = "\n".join(lines)
    (out / "convergence.txt").write_text(text + "\n")
    print(text)
    return 0


def _cmd_norms(args) -> int:
    report = l1_point_error(read_snapshot(args.coarse),
                            read_snapshot(args.reference))
    print(f"grid {report.nx}x{report.ny}")
    for name, v in zip(("rho", "rhou", "rhov", "e"), report.l1):
        print(f"l1_{name} {v:.8e}")
    return 0


def _cmd_extract(args) -> int:
    snap = read_snapshot(args.snapshot)
    if args.mode == "radial":
        cx = snap.x0 + snap.nx * snap.dx / 2.0
        cy = snap.y0 + snap.ny * snap.dy / 2.0
        print("# r rho")
        for r, rho in radial_scatter(snap, (cx, cy)):
            print(f"{r:.10g} {rho:.10g}")
    else:
        if args.at is None:
            raise ConfigError("--at is required for --mode line")
        chosen, data = line_cut(snap, "x", args.at)
        print(f"# cut at x = {chosen:.10g}")
        print("# s rho")
        for s, rho in data:
            print(f"{s:.10g} {rho:.10g}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code else 0
    handlers = {"run": _cmd_run, "convergence": _cmd_convergence,
                "norms": _cmd_norms, "extract": _cmd_extract}
    try:
        return handlers[args.command](args)
    except (ConfigError, FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (InvalidStateError, FloatingPointError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry points for the plotting package."""

from __future__ import annotations

import argparse
import sys

from .plots import PlotJob, plot
from .snapshots import FormatError


def _run(job: PlotJob) -> int:
    try:
        out = plot(job)
    except (FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--in", dest="inputs", required=True, action="append",
                        help="input file (repeatable where supported)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--component", default="rho",
                        choices=["rho", "rhou", "rhov", "e"])


def plot_snapshot_main(argv=None) -> int:
    p = argparse.ArgumentParser(
        prog="plot_snapshot",
        description="Pseudocolor map of a field from a solver snapshot.")
    _common(p)
    p.add_argument("--cmap", default="viridis", help="matplotlib colormap")
    p.add_argument("--isolines", type=float, default=None,
                   help="isoline spacing; omit for no isolines")
    p.add_argument("--vmin", type=float, default=None)
    p.add_argument("--vmax", type=float, default=None)
    p.add_argument("--radial", action="store_true",
                   help="radial scatter instead of a pseudocolor map")
    p.add_argument("--center", type=float, nargs=2, default=None,
                   metavar=("X", "Y"), help="center for the radial scatter")
    a = p.parse_args(argv)
    rng = None
    if a.vmin is not None and a.vmax is not None:
        rng = (a.vmin, a.vmax)
    job = PlotJob(inputs=a.inputs, kind="radial" if a.radial else "snapshot",
                  output=a.out, component=a.component, colormap=a.cmap,
                  isoline_spacing=a.isolines, axis_range=rng,
                  center=tuple(a.center) if a.center else None)
    return _run(job)


def plot_convergence_main(argv=None) -> int:
    p = argparse.ArgumentParser(
        prog="plot_convergence",
        description="Log-log error plot from a convergence table, with "
                    "observed orders and an order-3 guide line.")
    _common(p)
    a = p.parse_args(argv)
    job = PlotJob(inputs=a.inputs, kind="convergence", output=a.out,
                  component=a.component)
    return _run(job)


def plot_cut_main(argv=None) -> int:
    p = argparse.ArgumentParser(
        prog="plot_cut",
        description="Point values along a grid line cut of a snapshot.")
    _common(p)
    p.add_argument("--axis", default="x", choices=["x", "y"],
                   help="axis the cut is perpendicular to")
    p.add_argument("--at", type=float, required=True,
                   help="coordinate of the cut line")
    a = p.parse_args(argv)
    job = PlotJob(inputs=a.inputs, kind="cut", output=a.out,
                  component=a.component, cut_axis=a.axis, cut_at=a.at)
    return _run(job)

"""Figure generation from solver output files.

Three figure types: pseudocolor maps of cell-average density (optionally
with isolines), radial scatter of density against distance from a center,
and log-log convergence plots with per-segment observed orders and an
order-3 guide line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .snapshots import read_snapshot, read_convergence_table

COMPONENTS = {"rho": 0, "rhou": 1, "rhov": 2, "e": 3}


@dataclass
class PlotJob:
    inputs: Sequence[str]
    kind: str                     # "snapshot" | "radial" | "cut" | "convergence"
    output: str
    component: str = "rho"
    colormap: str = "viridis"
    isoline_spacing: Optional[float] = None
    axis_range: Optional[tuple] = None     # (vmin, vmax) for the color scale
    cut_axis: str = "x"
    cut_at: Optional[float] = None
    center: Optional[tuple] = None
    options: dict = field(default_factory=dict)


def plot(job: PlotJob):
    """Render the job and write the image; returns the output path."""
    fn = {
        "snapshot": _plot_snapshot,
        "radial": _plot_radial,
        "cut": _plot_cut,
        "convergence": _plot_convergence,
    }.get(job.kind)
    if fn is None:
        raise ValueError(f"unknown plot kind {job.kind!r}")
    fig = fn(job)
    out = Path(job.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return out


def _component(job):
    if job.component not in COMPONENTS:
        raise ValueError(f"unknown component {job.component!r}")
    return COMPONENTS[job.component]


def _plot_snapshot(job: PlotJob):
    snap = read_snapshot(job.inputs[0])
    data = snap.averages[..., _component(job)]
    x = snap.x0 + snap.dx * np.arange(snap.nx + 1)
    y = snap.y0 + snap.dy * np.arange(snap.ny + 1)
    vmin, vmax = job.axis_range or (float(data.min()), float(data.max()))
    if vmin == vmax:  # constant field: widen to a displayable range
        vmin, vmax = vmin - 0.5, vmax + 0.5
    fig, ax = plt.subplots(figsize=(6, 6 * snap.ny * snap.dy
                                    / (snap.nx * snap.dx)))
    mesh = ax.pcolormesh(x, y, data.T, cmap=job.colormap,
                         vmin=vmin, vmax=vmax)
    if job.isoline_spacing:
        lo = np.floor(data.min() / job.isoline_spacing)
        hi = np.ceil(data.max() / job.isoline_spacing)
        levels = np.arange(lo, hi + 1) * job.isoline_spacing
        if len(levels) > 1:
            xc = snap.x0 + snap.dx * (np.arange(snap.nx) + 0.5)
            yc = snap.y0 + snap.dy * (np.arange(snap.ny) + 0.5)
            ax.contour(xc, yc, data.T, levels=levels,
                       colors="black", linewidths=0.5)
    fig.colorbar(mesh, ax=ax, shrink=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"{job.component}, t = {snap.time:g}"
                 f"{', limited' if snap.limiter else ''}")
    ax.set_aspect("equal")
    return fig


def _plot_radial(job: PlotJob):
    snap = read_snapshot(job.inputs[0])
    data = snap.averages[..., _component(job)]
    cx, cy = job.center or (snap.x0 + 0.5 * snap.nx * snap.dx,
                            snap.y0 + 0.5 * snap.ny * snap.dy)
    xc = snap.x0 + snap.dx * (np.arange(snap.nx) + 0.5)
    yc = snap.y0 + snap.dy * (np.arange(snap.ny) + 0.5)
    X, Y = np.meshgrid(xc, yc, indexing="ij")
    r = np.hypot(X - cx, Y - cy).ravel()
    order = np.argsort(r)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(r[order], data.ravel()[order], ".", markersize=2)
    if len(job.inputs) > 1:  # optional two-column radial reference profile
        ref = np.loadtxt(job.inputs[1])
        ax.plot(ref[:, 0], ref[:, 1], "-", color="black", linewidth=1,
                label="reference")
        ax.legend()
    ax.set_xlabel("r")
    ax.set_ylabel(job.component)
    ax.set_title(f"radial scatter, t = {snap.time:g}")
    return fig


def _plot_cut(job: PlotJob):
    if job.cut_at is None:
        raise ValueError("cut plot needs the cut coordinate")
    snap = read_snapshot(job.inputs[0])
    c = _component(job)
    coord, values = _line_cut(snap, job.cut_axis, job.cut_at, c)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(coord, values, ".-", markersize=3, linewidth=0.7)
    along = "y" if job.cut_axis == "x" else "x"
    ax.set_xlabel(along)
    ax.set_ylabel(job.component)
    ax.set_title(f"{job.component} along {job.cut_axis} = {job.cut_at:g}, "
                 f"t = {snap.time:g}")
    return fig


def _line_cut(snap, axis, at, c):
    """Point values along the grid column nearest to the cut coordinate.

    Columns at even half-index hold nodes interleaved with parallel edge
    midpoints (spacing h/2); odd half-index columns hold the perpendicular
    edge midpoints (spacing h).
    """
    if axis == "x":
        h, origin, n = snap.dx, snap.x0, snap.nx
        nodes, para, perp = snap.nodes, snap.xedges, snap.yedges
    elif axis == "y":
        h, origin, n = snap.dy, snap.y0, snap.ny
        nodes = snap.nodes.transpose(1, 0, 2)
        para = snap.yedges.transpose(1, 0, 2)
        perp = snap.xedges.transpose(1, 0, 2)
    else:
        raise ValueError(f"bad cut axis {axis!r}")
    k = int(round(2.0 * (at - origin) / h))
    k = min(max(k, 0), 2 * n)
    other_h = snap.dy if axis == "x" else snap.dx
    other_origin = snap.y0 if axis == "x" else snap.x0
    if k % 2 == 0:
        i = k // 2
        m = nodes.shape[1] + para.shape[1]
        vals = np.empty(m)
        vals[0::2] = nodes[i, :, c]
        vals[1::2] = para[i, :, c]
        coord = other_origin + other_h / 2.0 * np.arange(m)
    else:
        i = (k - 1) // 2
        vals = perp[i, :, c]
        coord = other_origin + other_h * np.arange(len(vals))
    return coord, vals


def _plot_convergence(job: PlotJob):
    grids, l1, orders = read_convergence_table(job.inputs[0])
    c = _component(job)
    h = 1.0 / grids.astype(float)
    err = l1[:, c]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(h, err, "o-", label=f"L1({job.component})")
    # annotate per-segment observed orders
    for i in range(1, len(grids)):
        slope = np.log2(err[i - 1] / err[i]) / np.log2(grids[i] / grids[i - 1])
        ax.annotate(f"{slope:.2f}",
                    (np.sqrt(h[i] * h[i - 1]),
                     np.sqrt(err[i] * err[i - 1])),
                    textcoords="offset points", xytext=(5, 5), fontsize=9)
    guide = err[-1] * (h / h[-1]) ** 3
    ax.loglog(h, guide, "--", color="gray", label="order 3")
    ax.set_xlabel("h")
    ax.set_ylabel("L1 error of the point values")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    return fig

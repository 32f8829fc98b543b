"""Snapshot serialization, error norms, and figure-data extraction.

Binary layout (little-endian): magic "AFX2", u32 version, u64 nx, u64 ny,
f64 dx, dy, x0, y0, time, gamma, u32 limiter flag, then the four dof arrays
(averages, nodes, xedges, yedges) as f64, row-major with i fastest and the
four conserved components innermost.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import GHOST, DofField

MAGIC = b"AFX2"
VERSION = 1
_HEADER = struct.Struct("<4sIQQddddddI")


class FormatError(ValueError):
    """Unreadable or inconsistent snapshot data."""


@dataclass
class Snapshot:
    nx: int
    ny: int
    dx: float
    dy: float
    x0: float
    y0: float
    time: float
    gamma: float
    limiter: bool
    averages: np.ndarray  # (nx, ny, 4)
    nodes: np.ndarray     # (nx+1, ny+1, 4)
    xedges: np.ndarray    # (nx+1, ny, 4)
    yedges: np.ndarray    # (nx, ny+1, 4)

    def arrays(self):
        return (self.averages, self.nodes, self.xedges, self.yedges)


def snapshot_from_field(f: DofField, time: float, gamma: float,
                        limiter: bool) -> Snapshot:
    nx, ny, G = f.spec.nx, f.spec.ny, GHOST
    return Snapshot(
        nx=nx, ny=ny, dx=f.spec.dx, dy=f.spec.dy,
        x0=f.spec.x0, y0=f.spec.y0, time=time, gamma=gamma, limiter=limiter,
        averages=f.averages[G:G + nx, G:G + ny].copy(),
        nodes=f.nodes[G:G + nx + 1, G:G + ny + 1].copy(),
        xedges=f.xedges[G:G + nx + 1, G:G + ny].copy(),
        yedges=f.yedges[G:G + nx, G:G + ny + 1].copy(),
    )


def write_snapshot(path, snap: Snapshot) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, snap.nx, snap.ny,
                              snap.dx, snap.dy, snap.x0, snap.y0,
                              snap.time, snap.gamma, int(snap.limiter)))
        for arr in snap.arrays():
            # row-major with i fastest: j is the slow axis on disk
            fh.write(np.ascontiguousarray(
                arr.transpose(1, 0, 2), dtype="<f8").tobytes())


def read_snapshot(path) -> Snapshot:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: truncated header")
    magic, version, nx, ny, dx, dy, x0, y0, time, gamma, lim = \
        _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    shapes = [(nx, ny, 4), (nx + 1, ny + 1, 4), (nx + 1, ny, 4), (nx, ny + 1, 4)]
    need = _HEADER.size + 8 * sum(int(np.prod(s)) for s in shapes)
    if len(raw) != need:
        raise FormatError(f"{path}: expected {need} bytes, got {len(raw)}")
    off = _HEADER.size
    arrays = []
    for s in shapes:
        count = int(np.prod(s))
        flat = np.frombuffer(raw, dtype="<f8", count=count, offset=off)
        off += 8 * count
        arrays.append(flat.reshape(s[1], s[0], 4).transpose(1, 0, 2).copy())
    return Snapshot(nx=nx, ny=ny, dx=dx, dy=dy, x0=x0, y0=y0, time=time,
                    gamma=gamma, limiter=bool(lim),
                    averages=arrays[0], nodes=arrays[1],
                    xedges=arrays[2], yedges=arrays[3])


_FAMILIES = {
    # name -> (array attr, x offset in half-cells, y offset in half-cells)
    "averages": ("averages", 1, 1),
    "nodes": ("nodes", 0, 0),
    "xedges": ("xedges", 0, 1),
    "yedges": ("yedges", 1, 0),
}


def write_csv(base_path, snap: Snapshot) -> list:
    """One CSV per dof family: <base>_<family>.csv with header
    i,j,x,y,rho,rhou,rhov,e."""
    base = Path(base_path)
    written = []
    for name, (attr, ox, oy) in _FAMILIES.items():
        arr = getattr(snap, attr)
        path = base.parent / f"{base.name}_{name}.csv"
        with open(path, "w") as fh:
            fh.write("i,j,x,y,rho,rhou,rhov,e\n")
            for i in range(arr.shape[0]):
                x = snap.x0 + (2 * i + ox) * snap.dx / 2.0
                for j in range(arr.shape[1]):
                    y = snap.y0 + (2 * j + oy) * snap.dy / 2.0
                    q = arr[i, j]
                    fh.write(f"{i},{j},{x:.17g},{y:.17g},"
                             f"{q[0]:.17g},{q[1]:.17g},{q[2]:.17g},{q[3]:.17g}\n")
        written.append(path)
    return written


@dataclass
class ErrorReport:
    nx: int
    ny: int
    l1: np.ndarray            # (4,) per conserved component
    order: np.ndarray = None  # (4,) vs the next finer report, if any


def l1_point_error(coarse: Snapshot, reference: Snapshot) -> ErrorReport:
    """L1 norm over all coarse point dofs of the difference to the reference
    value at the coincident location, weighted by the coarse cell area.

    The reference must be a power-of-two refinement of the coarse grid over
    the same domain; every coarse point location then exists on the fine
    grid (as a node or an edge midpoint depending on parity).
    """
    if coarse.nx == 0 or reference.nx % coarse.nx or reference.ny % coarse.ny:
        raise ValueError("reference grid is not a refinement of the coarse grid")
    r = reference.nx // coarse.nx
    if reference.ny // coarse.ny != r or (r & (r - 1)):
        raise ValueError("reference grid is not a power-of-two refinement")
    if not (np.isclose(coarse.x0, reference.x0)
            and np.isclose(coarse.y0, reference.y0)
            and np.isclose(coarse.nx * coarse.dx, reference.nx * reference.dx)
            and np.isclose(coarse.ny * coarse.dy, reference.ny * reference.dy)):
        raise ValueError("snapshot domains differ")

    fine = {(0, 0): reference.nodes, (0, 1): reference.xedges,
            (1, 0): reference.yedges}
    total = np.zeros(4)
    for name in ("nodes", "xedges", "yedges"):
        attr, ox, oy = _FAMILIES[name]
        arr = getattr(coarse, attr)
        # half-cell index of point (i, j): (2i + ox, 2j + oy); on the fine
        # grid the same location has half-cell index scaled by r.
        hi = (2 * np.arange(arr.shape[0]) + ox) * r
        hj = (2 * np.arange(arr.shape[1]) + oy) * r
        px, py = int(hi[0] % 2), int(hj[0] % 2)
        ref_arr = fine[(px, py)]
        ref_vals = ref_arr[np.ix_(hi // 2, hj // 2)]
        total += np.abs(arr - ref_vals).sum(axis=(0, 1))
    return ErrorReport(nx=coarse.nx, ny=coarse.ny,
                       l1=total * coarse.dx * coarse.dy)


def convergence_orders(reports: list) -> list:
    """Attach observed orders log2(E(h)/E(h/2)) to consecutive reports,
    coarse to fine; returns the same list."""
    reports = sorted(reports, key=lambda rep: rep.nx)
    for a, b in zip(reports, reports[1:]):
        with np.errstate(divide="ignore", invalid="ignore"):
            a.order = np.log2(a.l1 / b.l1) / np.log2(b.nx / a.nx)
    return reports


def radial_scatter(snap: Snapshot, center) -> np.ndarray:
    """(r, rho) pairs at every cell-average location, sorted by radius."""
    cx, cy = center
    x = snap.x0 + snap.dx * (np.arange(snap.nx) + 0.5)
    y = snap.y0 + snap.dy * (np.arange(snap.ny) + 0.5)
    X, Y = np.meshgrid(x, y, indexing="ij")
    rr = np.hypot(X - cx, Y - cy).ravel()
    rho = snap.averages[..., 0].ravel()
    order = np.argsort(rr, kind="stable")
    return np.stack([rr[order], rho[order]], axis=-1)


def line_cut(snap: Snapshot, axis: str, coordinate: float):
    """Point values along the dof column/row nearest the requested line.

    axis 'x': cut along a vertical line x = coordinate; axis 'y': along a
    horizontal line y = coordinate.  Returns (chosen coordinate, array of
    (s, rho) pairs).  Columns through nodes have spacing h/2 (nodes and
    edge midpoints interleave); columns through perpendicular edge
    midpoints have spacing h.
    """
    if axis == "x":
        k = int(round(2.0 * (coordinate - snap.x0) / snap.dx))
        k = min(max(k, 0), 2 * snap.nx)
        chosen = snap.x0 + k * snap.dx / 2.0
        if k % 2 == 0:  # node column: nodes and xedges interleave in y
            i = k // 2
            s = snap.y0 + snap.dy / 2.0 * np.arange(2 * snap.ny + 1)
            vals = np.empty(2 * snap.ny + 1)
            vals[0::2] = snap.nodes[i, :, 0]
            vals[1::2] = snap.xedges[i, :, 0]
        else:           # column of horizontal-edge midpoints
            i = (k - 1) // 2
            s = snap.y0 + snap.dy * np.arange(snap.ny + 1)
            vals = snap.yedges[i, :, 0]
    elif axis == "y":
        k = int(round(2.0 * (coordinate - snap.y0) / snap.dy))
        k = min(max(k, 0), 2 * snap.ny)
        chosen = snap.y0 + k * snap.dy / 2.0
        if k % 2 == 0:
            j = k // 2
            s = snap.x0 + snap.dx / 2.0 * np.arange(2 * snap.nx + 1)
            vals = np.empty(2 * snap.nx + 1)
            vals[0::2] = snap.nodes[:, j, 0]
            vals[1::2] = snap.yedges[:, j, 0]
        else:
            j = (k - 1) // 2
            s = snap.x0 + snap.dx * np.arange(snap.nx + 1)
            vals = snap.xedges[:, j, 0]
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return chosen, np.stack([s, vals], axis=-1)

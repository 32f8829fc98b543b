"""Standalone reader for the solver's binary snapshot format.

Binary layout (little-endian): magic "AFX2", u32 version, u64 nx, u64 ny,
f64 dx, dy, x0, y0, time, gamma, u32 limiter flag, then the four dof arrays
(averages, nodes, xedges, yedges) as f64, row-major with i fastest and the
four conserved components innermost.

This module deliberately does not import the solver package: plotting
consumes only the documented file formats.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

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

    def pressure_averages(self) -> np.ndarray:
        q = self.averages
        kinetic = 0.5 * (q[..., 1] ** 2 + q[..., 2] ** 2) / q[..., 0]
        return (self.gamma - 1.0) * (q[..., 3] - kinetic)


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


def read_convergence_table(path):
    """Parse the solver's convergence table: '# nx l1_<c>... order_<c>...'
    header line, then one row per grid with '-' for missing orders.

    Returns (grids, l1, orders) with l1 of shape (n, 4) and orders an array
    of the same shape with NaN where absent.
    """
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()
             if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise FormatError(f"{path}: missing header line")
    ncol = len(lines[0].lstrip("#").split())
    grids, l1, orders = [], [], []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != ncol:
            raise FormatError(f"{path}: malformed row {ln!r}")
        grids.append(int(toks[0]))
        half = (ncol - 1) // 2
        l1.append([float(t) for t in toks[1:1 + half]])
        orders.append([float("nan") if t == "-" else float(t)
                       for t in toks[1 + half:]])
    return np.array(grids), np.array(l1), np.array(orders)

"""Storage and indexing for the Active Flux degree-of-freedom layout.

A cell (i, j) carries one average; its boundary carries 8 shared point
values: 4 corner nodes and 4 edge midpoints.  Nodes live on an
(nx+1) x (ny+1) lattice, vertical-face midpoints ("xedges") on
(nx+1) x ny, horizontal-face midpoints ("yedges") on nx x (ny+1).
Every array carries a ghost margin of GHOST cells on each side.

Index conventions (ghost offset excluded): average (i, j) is the cell
[x0+i*dx, x0+(i+1)*dx] x [...]; node (k, l) sits at (x0+k*dx, y0+l*dy);
xedge (k, j) at (x0+k*dx, y0+(j+1/2)*dy); yedge (i, l) at
(x0+(i+1/2)*dx, y0+l*dy).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

# Widest one-sided stencil reaches one cell beyond a face; 2 leaves headroom
# for limited reconstructions of the first ghost cell.
GHOST = 2


class BoundaryCondition(enum.Enum):
    PERIODIC = "periodic"
    EXTRAPOLATE = "extrapolate"
    # Periodic in x, zeroth-order extrapolation in y.  Still one kind for the
    # whole run; needed for the shear-instability setup.
    PERIODIC_X_EXTRAPOLATE_Y = "periodic_x_extrapolate_y"


@dataclass(frozen=True)
class GridSpec:
    nx: int
    ny: int
    x0: float = 0.0
    y0: float = 0.0
    dx: float = 1.0
    dy: float = 1.0
    bc: BoundaryCondition = BoundaryCondition.PERIODIC

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise ValueError("need nx, ny >= 3")
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError("need dx, dy > 0")

    # Physical coordinates of dof locations (no ghost offset).
    def node_xy(self, k, l):
        return self.x0 + k * self.dx, self.y0 + l * self.dy

    def xedge_xy(self, k, j):
        return self.x0 + k * self.dx, self.y0 + (j + 0.5) * self.dy

    def yedge_xy(self, i, l):
        return self.x0 + (i + 0.5) * self.dx, self.y0 + l * self.dy

    def cell_center(self, i, j):
        return self.x0 + (i + 0.5) * self.dx, self.y0 + (j + 0.5) * self.dy


class _GhostView:
    """Ghost-aware accessor: view[i, j] maps to raw[i + GHOST, j + GHOST].

    Slices are not supported; the solver works on the raw arrays directly.
    """

    def __init__(self, raw: np.ndarray, n0: int, n1: int):
        self.raw = raw
        self._n0 = n0
        self._n1 = n1

    def _map(self, idx):
        i, j = idx
        if not (-GHOST <= i < self._n0 + GHOST and -GHOST <= j < self._n1 + GHOST):
            raise IndexError(
                f"index ({i}, {j}) outside physical+ghost range "
                f"[{-GHOST}, {self._n0 + GHOST}) x [{-GHOST}, {self._n1 + GHOST})"
            )
        return i + GHOST, j + GHOST

    def __getitem__(self, idx):
        return self.raw[self._map(idx)]

    def __setitem__(self, idx, value):
        self.raw[self._map(idx)] = value


@dataclass
class DofField:
    """Cell averages plus shared point values, with ghost margins.

    Raw array shapes (4 conserved components innermost):
      averages (nx+2G, ny+2G, 4), nodes (nx+1+2G, ny+1+2G, 4),
      xedges (nx+1+2G, ny+2G, 4), yedges (nx+2G, ny+1+2G, 4).
    """

    spec: GridSpec
    averages: np.ndarray = field(repr=False, default=None)
    nodes: np.ndarray = field(repr=False, default=None)
    xedges: np.ndarray = field(repr=False, default=None)
    yedges: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        nx, ny, G = self.spec.nx, self.spec.ny, GHOST
        if self.averages is None:
            self.averages = np.zeros((nx + 2 * G, ny + 2 * G, 4))
            self.nodes = np.zeros((nx + 1 + 2 * G, ny + 1 + 2 * G, 4))
            self.xedges = np.zeros((nx + 1 + 2 * G, ny + 2 * G, 4))
            self.yedges = np.zeros((nx + 2 * G, ny + 1 + 2 * G, 4))

    @property
    def avg(self) -> _GhostView:
        return _GhostView(self.averages, self.spec.nx, self.spec.ny)

    @property
    def node(self) -> _GhostView:
        return _GhostView(self.nodes, self.spec.nx + 1, self.spec.ny + 1)

    @property
    def xedge(self) -> _GhostView:
        return _GhostView(self.xedges, self.spec.nx + 1, self.spec.ny)

    @property
    def yedge(self) -> _GhostView:
        return _GhostView(self.yedges, self.spec.nx, self.spec.ny + 1)

    def copy(self) -> "DofField":
        return DofField(
            self.spec,
            self.averages.copy(),
            self.nodes.copy(),
            self.xedges.copy(),
            self.yedges.copy(),
        )

    def arrays(self):
        return (self.averages, self.nodes, self.xedges, self.yedges)


def allocate(spec: GridSpec) -> DofField:
    """Zero-initialized field with correct extents."""
    return DofField(spec)


def _wrap_axis(arr: np.ndarray, axis: int, n_cells: int, seam: bool):
    """Periodic fill along one axis.

    arr has n_phys physical slots starting at GHOST.  For seam arrays
    (n_phys == n_cells + 1) slot n_cells duplicates slot 0; it is
    synchronized first, then ghosts wrap with period n_cells.
    """
    G = GHOST
    idx = [slice(None)] * arr.ndim

    def at(k):
        ix = list(idx)
        ix[axis] = k + G
        return tuple(ix)

    if seam:
        arr[at(n_cells)] = arr[at(0)]
    for g in range(1, G + 1):
        arr[at(-g)] = arr[at(n_cells - g)]
        if seam:
            arr[at(n_cells + g)] = arr[at(g)]
        else:
            arr[at(n_cells - 1 + g)] = arr[at(g - 1)]


def _extrap_axis(arr: np.ndarray, axis: int, n_phys: int):
    G = GHOST
    idx = [slice(None)] * arr.ndim

    def at(k):
        ix = list(idx)
        ix[axis] = k
        return tuple(ix)

    for g in range(G):
        arr[at(g)] = arr[at(G)]
        arr[at(n_phys + G + g)] = arr[at(n_phys + G - 1)]


def _fill_axis(arr, axis, n_cells, n_phys, periodic):
    if periodic:
        _wrap_axis(arr, axis, n_cells, seam=(n_phys == n_cells + 1))
    else:
        _extrap_axis(arr, axis, n_phys)


def fill_ghosts(f: DofField) -> DofField:
    """Populate ghost slots of all four arrays in place; returns f."""
    spec = f.spec
    nx, ny = spec.nx, spec.ny
    bc = spec.bc
    per_x = bc in (BoundaryCondition.PERIODIC, BoundaryCondition.PERIODIC_X_EXTRAPOLATE_Y)
    per_y = bc is BoundaryCondition.PERIODIC
    for arr, npx, npy in (
        (f.averages, nx, ny),
        (f.nodes, nx + 1, ny + 1),
        (f.xedges, nx + 1, ny),
        (f.yedges, nx, ny + 1),
    ):
        _fill_axis(arr, 0, nx, npx, per_x)
        _fill_axis(arr, 1, ny, npy, per_y)
    return f


# Order of the 8 boundary values of a cell, used throughout the package.
SW, S, SE, W, E, NW, N, NE = range(8)
BOUNDARY_NAMES = ("sw", "s", "se", "w", "e", "nw", "n", "ne")


def cell_boundary_values(f: DofField, i: int, j: int) -> np.ndarray:
    """The 8 point values on the boundary of cell (i, j), shape (8, 4).

    Ordered (SW, S, SE, W, E, NW, N, NE).  Values are drawn from the shared
    arrays, so adjacent cells observe identical values on a common face.
    """
    return np.stack(
        [
            f.node[i, j],
            f.yedge[i, j],
            f.node[i + 1, j],
            f.xedge[i, j],
            f.xedge[i + 1, j],
            f.node[i, j + 1],
            f.yedge[i, j + 1],
            f.node[i + 1, j + 1],
        ]
    )

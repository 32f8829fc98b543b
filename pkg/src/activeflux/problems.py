"""Initial-condition library and per-problem defaults.

Four test problems: a smooth acoustic Gaussian pulse, a radial Sod shock
tube, four-quadrant Riemann problems (quadrant states from a data file),
and a Kelvin-Helmholtz instability triggered by an acoustic wave.

Point-value dofs sample the initial condition exactly at their locations;
cell averages use 5x5 tensor Gauss quadrature of the conserved variables.
For region-wise-constant data this gives the exact constant in uncut cells
and a first-order-accurate average in cut cells.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .euler import GasParams, conserved_from_primitive
from .grid import GHOST, BoundaryCondition, DofField, GridSpec, allocate


class ConfigError(ValueError):
    """Malformed or missing problem configuration data."""


@dataclass(frozen=True)
class Problem:
    """A named initial condition with its default domain and run length.

    ic(x, y) accepts broadcasting arrays and returns primitive variables
    stacked on the last axis: (rho, u, v, p).
    """

    name: str
    ic: Callable[[np.ndarray, np.ndarray], np.ndarray]
    x0: float
    y0: float
    width: float
    height: float
    bc: BoundaryCondition
    t_end: float

    def spec(self, nx: int, ny: int) -> GridSpec:
        return GridSpec(nx=nx, ny=ny, x0=self.x0, y0=self.y0,
                        dx=self.width / nx, dy=self.height / ny, bc=self.bc)

    def initialize(self, spec: GridSpec, gas: GasParams) -> DofField:
        return initialize_dofs(self.ic, spec, gas)


def _primitives(rho, u, v, p):
    return np.stack(np.broadcast_arrays(
        np.asarray(rho, float), np.asarray(u, float),
        np.asarray(v, float), np.asarray(p, float)), axis=-1)


def gaussian_ic(x, y):
    """Smooth pulse: rho = p = 1 + exp(-80 (x^2 + y^2)) / 2, fluid at rest."""
    bump = 1.0 + 0.5 * np.exp(-80.0 * (np.asarray(x) ** 2 + np.asarray(y) ** 2))
    return _primitives(bump, 0.0, 0.0, bump)


def sod_ic(x, y, center=(0.5, 0.5), radius=0.3):
    """Radial shock tube: (1,0,0,1) strictly inside the circle, else
    (0.125, 0, 0, 0.1)."""
    r2 = (np.asarray(x) - center[0]) ** 2 + (np.asarray(y) - center[1]) ** 2
    inner = r2 < radius * radius
    return _primitives(np.where(inner, 1.0, 0.125), 0.0, 0.0,
                       np.where(inner, 1.0, 0.1))


def kh_ic(x, y, mach):
    """Shear layer seeded by an acoustic wave profile psi(x) = 1 + cos(pi M x);
    the density offset phi(y) jumps at y = 4."""
    if mach <= 0:
        raise ConfigError(f"mach must be positive, got {mach}")
    gamma = 1.4
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    psi = 1.0 + np.cos(np.pi * mach * x)
    phi = np.where(y < 4.0, 2.0 * mach * y, 2.0 * mach * (y - 4.0) - 0.4)
    rho = 1.0 + (mach / 5.0) * psi + phi
    u = np.sqrt(gamma) * psi
    p = 1.0 / mach ** 2 + (gamma / mach) * psi
    return _primitives(rho, u, np.zeros_like(psi), p)


def load_quadrant_states(path: Optional[Path] = None) -> dict:
    """Parse the quadrant-state file: {config_id: (4, 4) array}, rows are
    quadrants 1..4 (NE, NW, SW, SE), columns (rho, u, v, p)."""
    if path is None:
        source = importlib.resources.files("activeflux").joinpath(
            "data/lax_liu.txt")
        text = source.read_text()
    else:
        text = Path(path).read_text()
    table: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ConfigError(f"line {lineno}: expected 6 fields, got {len(parts)}")
        try:
            cid, quad = int(parts[0]), int(parts[1])
            state = [float(v) for v in parts[2:]]
        except ValueError as err:
            raise ConfigError(f"line {lineno}: {err}") from err
        if not 1 <= quad <= 4:
            raise ConfigError(f"line {lineno}: quadrant must be 1..4")
        table.setdefault(cid, {})[quad] = state
    out = {}
    for cid, quads in table.items():
        if sorted(quads) != [1, 2, 3, 4]:
            raise ConfigError(f"config {cid}: missing quadrants")
        out[cid] = np.array([quads[q] for q in (1, 2, 3, 4)])
    return out


def laxliu_ic_factory(config_id: int, data_file: Optional[Path] = None,
                      center=(0.5, 0.5)):
    states = load_quadrant_states(data_file)
    if config_id not in states:
        raise ConfigError(f"configuration {config_id} not in the data file")
    s = states[config_id]

    def ic(x, y):
        east = np.asarray(x) >= center[0]
        north = np.asarray(y) >= center[1]
        # quadrant rows: 0 = NE, 1 = NW, 2 = SW, 3 = SE
        idx = np.where(north, np.where(east, 0, 1), np.where(east, 3, 2))
        return s[idx]

    return ic


_LAXLIU_T_END = {6: 0.3, 11: 0.3, 12: 0.25, 16: 0.2}

DEFAULT_KH_MACH = 1.0 / 20.0


def make_problem(name: str, data_file: Optional[Path] = None,
                 mach: float = DEFAULT_KH_MACH) -> Problem:
    """Problems by name: gaussian, sod, laxliu<id>, kh."""
    if name == "gaussian":
        return Problem("gaussian", gaussian_ic, -0.5, -0.5, 1.0, 1.0,
                       BoundaryCondition.PERIODIC, t_end=0.05)
    if name == "sod":
        return Problem("sod", sod_ic, 0.0, 0.0, 1.0, 1.0,
                       BoundaryCondition.EXTRAPOLATE, t_end=0.2)
    if name.startswith("laxliu"):
        try:
            cid = int(name[len("laxliu"):])
        except ValueError:
            raise ConfigError(f"bad problem name {name!r}") from None
        ic = laxliu_ic_factory(cid, data_file)
        return Problem(name, ic, -0.25, -0.25, 1.5, 1.5,
                       BoundaryCondition.EXTRAPOLATE,
                       t_end=_LAXLIU_T_END.get(cid, 0.25))
    if name == "kh":
        return Problem("kh", lambda x, y: kh_ic(x, y, mach),
                       0.0, 0.0, 2.0 / mach, 8.0,
                       BoundaryCondition.PERIODIC_X_EXTRAPOLATE_Y, t_end=3.0)
    raise ConfigError(f"unknown problem {name!r}")


PROBLEM_NAMES = ("gaussian", "sod", "laxliu6", "laxliu11", "laxliu12",
                 "laxliu16", "kh")

_GAUSS_N = 5
_GQ_X, _GQ_W = np.polynomial.legendre.leggauss(_GAUSS_N)


def initialize_dofs(ic, spec: GridSpec, gas: GasParams) -> DofField:
    """Sample point values; average conserved variables by 5x5 Gauss."""
    f = allocate(spec)
    nx, ny, G = spec.nx, spec.ny, GHOST

    def sample(xs, ys):
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        prim = ic(X, Y)
        return conserved_from_primitive(prim[..., 0], prim[..., 1],
                                        prim[..., 2], prim[..., 3], gas)

    xn = spec.x0 + spec.dx * np.arange(nx + 1)
    yn = spec.y0 + spec.dy * np.arange(ny + 1)
    xc = spec.x0 + spec.dx * (np.arange(nx) + 0.5)
    yc = spec.y0 + spec.dy * (np.arange(ny) + 0.5)
    f.nodes[G:G + nx + 1, G:G + ny + 1] = sample(xn, yn)
    f.xedges[G:G + nx + 1, G:G + ny] = sample(xn, yc)
    f.yedges[G:G + nx, G:G + ny + 1] = sample(xc, yn)

    # 5x5 tensor Gauss per cell: abscissae (nx, 5) flattened per axis.
    qx = (xc[:, None] + 0.5 * spec.dx * _GQ_X[None, :]).ravel()
    qy = (yc[:, None] + 0.5 * spec.dy * _GQ_X[None, :]).ravel()
    vals = sample(qx, qy).reshape(nx, _GAUSS_N, ny, _GAUSS_N, 4)
    w = 0.5 * _GQ_W
    f.averages[G:G + nx, G:G + ny] = np.einsum("iajb...,a,b->ij...", vals, w, w)
    return f

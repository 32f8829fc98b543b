"""CFL-controlled SSP-RK3 time integration of averages and point values."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

import numpy as np

from .averages import average_rhs
from .euler import GasParams, InvalidStateError, max_wave_speeds, primitive_from_conserved
from .fd_ops import point_rhs
from .grid import GHOST, DofField, GridSpec, fill_ghosts


@dataclass
class RunParams:
    cfl: float = 0.2
    t_end: float = 1.0
    limiter_on: bool = True
    max_steps: int = 1_000_000
    snapshot_times: Sequence[float] = ()

    def __post_init__(self):
        if not 0.0 < self.cfl <= 0.41:
            raise ValueError(f"cfl must be in (0, 0.41], got {self.cfl}")
        if self.t_end < 0.0:
            raise ValueError(f"t_end must be >= 0, got {self.t_end}")


def _physical_dofs(f: DofField):
    nx, ny, G = f.spec.nx, f.spec.ny, GHOST
    yield f.averages[G:G + nx, G:G + ny]
    yield f.nodes[G:G + nx + 1, G:G + ny + 1]
    yield f.xedges[G:G + nx + 1, G:G + ny]
    yield f.yedges[G:G + nx, G:G + ny + 1]


def compute_dt(f: DofField, cfl: float, gas: GasParams,
               t: float = 0.0, stop_times: Sequence[float] = ()) -> float:
    """cfl times the min over all dofs of min(dx/sx, dy/sy), clipped so the
    step lands exactly on the next stop time (snapshot or end)."""
    dx, dy = f.spec.dx, f.spec.dy
    limit = np.inf
    for q in _physical_dofs(f):
        sx, sy = max_wave_speeds(q, gas)
        limit = min(limit, np.min(dx / sx), np.min(dy / sy))
    if not np.isfinite(limit):
        raise InvalidStateError("non-finite wave speed in dt computation")
    dt = cfl * limit
    ahead = [s for s in stop_times if s > t + 1e-14 * max(1.0, abs(t))]
    if ahead:
        dt = min(dt, min(ahead) - t)
    return dt


def _rhs(f: DofField, limiter_on: bool, gas: GasParams):
    pr = point_rhs(f, limiter_on, gas)
    return average_rhs(f, gas), pr


def _apply(out: DofField, a, fa, b_coef, fb, dt, rhs):
    """out = a*fa + b*(fb + dt*L(fb)) applied to every physical dof array."""
    avg_rhs, pr = rhs
    point_parts = (None, pr.nodes, pr.xedges, pr.yedges)
    for dst, src_a, src_b, r in zip(_physical_dofs(out), _physical_dofs(fa),
                                    _physical_dofs(fb),
                                    (avg_rhs,) + point_parts[1:]):
        dst[:] = a * src_a + b_coef * (src_b + dt * r)
    fill_ghosts(out)
    return out


def rk3_step(f: DofField, dt: float, limiter_on: bool, gas: GasParams) -> DofField:
    """One strong-stability-preserving three-stage step.

    u1 = u + dt L(u); u2 = 3/4 u + 1/4 (u1 + dt L(u1));
    u_next = 1/3 u + 2/3 (u2 + dt L(u2)).  Reconstructions (and limiter
    decisions) are rebuilt inside every stage's RHS evaluation.
    """
    u1 = _apply(f.copy(), 0.0, f, 1.0, f, dt, _rhs(f, limiter_on, gas))
    u2 = _apply(u1.copy(), 0.75, f, 0.25, u1, dt, _rhs(u1, limiter_on, gas))
    return _apply(u2.copy(), 1.0 / 3.0, f, 2.0 / 3.0, u2, dt,
                  _rhs(u2, limiter_on, gas))


@dataclass
class RunDiagnostics:
    steps: int = 0
    t: float = 0.0
    min_rho: float = np.inf
    max_rho: float = -np.inf
    min_p: float = np.inf
    max_p: float = -np.inf

    def observe(self, f: DofField, gas: GasParams):
        for q in _physical_dofs(f):
            rho, _, _, p = primitive_from_conserved(q, gas)
            self.min_rho = min(self.min_rho, float(rho.min()))
            self.max_rho = max(self.max_rho, float(rho.max()))
            self.min_p = min(self.min_p, float(p.min()))
            self.max_p = max(self.max_p, float(p.max()))


def run(problem, spec: GridSpec, params: RunParams,
        sink: Optional[Callable[[DofField, float], None]] = None,
        gas: GasParams = GasParams(),
        progress: bool = True) -> tuple[DofField, RunDiagnostics]:
    """Initialize the problem, advance to t_end, emit snapshots via sink.

    sink(field, t) is called at every requested snapshot time and at t_end.
    """
    f = problem.initialize(spec, gas)
    fill_ghosts(f)
    diag = RunDiagnostics()
    diag.observe(f, gas)
    stops = sorted(set(float(s) for s in params.snapshot_times
                       if 0.0 < s <= params.t_end) | {params.t_end})
    t = 0.0
    emitted = set()

    def maybe_emit(t_now):
        for s in stops:
            if s not in emitted and abs(t_now - s) <= 1e-12 * max(1.0, s):
                emitted.add(s)
                if sink is not None:
                    sink(f, t_now)

    if params.t_end == 0.0:
        if sink is not None:
            sink(f, 0.0)
        return f, diag
    while t < params.t_end - 1e-12 * max(1.0, params.t_end):
        if diag.steps >= params.max_steps:
            raise RuntimeError(
                f"max_steps={params.max_steps} exceeded at t={t:.6g}")
        dt = compute_dt(f, params.cfl, gas, t, stops)
        try:
            f = rk3_step(f, dt, params.limiter_on, gas)
        except InvalidStateError as err:
            raise InvalidStateError(
                f"step {diag.steps + 1} (t={t:.6g}, dt={dt:.3g}): {err}",
                state=err.state, location=err.location) from err
        t += dt
        diag.steps += 1
        diag.t = t
        diag.observe(f, gas)
        if progress:
            print(f"step {diag.steps:6d}  t={t:.6f}  dt={dt:.3e}  "
                  f"min_rho={diag.min_rho:.4e}  min_p={diag.min_p:.4e}",
                  file=sys.stderr)
        maybe_emit(t)
    return f, diag

"""Compressible Euler physics: fluxes, closure, Jacobians and their sign splitting.

Conserved states are numpy arrays of shape (..., 4) holding
(rho, rho*u, rho*v, e) with e the total energy density.  All functions are
pure and broadcast over leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InvalidStateError(ValueError):
    """Raised when a state has non-positive density or pressure.

    Carries the offending state (and optionally a grid location) so that
    blow-ups are diagnosable.
    """

    def __init__(self, message, state=None, location=None):
        self.state = state
        self.location = location
        detail = message
        if location is not None:
            detail += f" at {location}"
        if state is not None:
            detail += f", state={np.asarray(state)!r}"
        super().__init__(detail)


@dataclass(frozen=True)
class GasParams:
    """Ideal-gas parameters.  gamma must exceed 1."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")


@dataclass(frozen=True)
class PrimitiveState:
    rho: float
    u: float
    v: float
    p: float

    def __post_init__(self):
        if not (self.rho > 0 and self.p > 0):
            raise ValueError(f"need rho > 0 and p > 0, got rho={self.rho}, p={self.p}")


@dataclass(frozen=True)
class JacobianSplit:
    """Eigenvalue-sign split of a flux Jacobian: j_plus + j_minus == J."""

    j_plus: np.ndarray
    j_minus: np.ndarray


def conserved_from_primitive(rho, u, v, p, gas: GasParams) -> np.ndarray:
    rho, u, v, p = np.broadcast_arrays(
        np.asarray(rho, float), np.asarray(u, float), np.asarray(v, float), np.asarray(p, float)
    )
    e = p / (gas.gamma - 1.0) + 0.5 * rho * (u * u + v * v)
    return np.stack([rho, rho * u, rho * v, e], axis=-1)


def primitive_from_conserved(q, gas: GasParams):
    """Return (rho, u, v, p) arrays; raises on rho <= 0."""
    q = np.asarray(q, float)
    rho = q[..., 0]
    if np.any(rho <= 0) or not np.all(np.isfinite(rho)):
        bad = np.argmin(rho)
        raise InvalidStateError("non-positive density", state=np.reshape(q, (-1, 4))[bad])
    u = q[..., 1] / rho
    v = q[..., 2] / rho
    p = (gas.gamma - 1.0) * (q[..., 3] - 0.5 * rho * (u * u + v * v))
    return rho, u, v, p


def pressure(q, gas: GasParams):
    return primitive_from_conserved(q, gas)[3]


def sound_speed(q, gas: GasParams):
    rho, _, _, p = primitive_from_conserved(q, gas)
    if np.any(p <= 0) or not np.all(np.isfinite(p)):
        bad = np.argmin(np.asarray(p).ravel())
        raise InvalidStateError("non-positive pressure", state=np.reshape(q, (-1, 4))[bad])
    return np.sqrt(gas.gamma * p / rho)


def flux_x(q, gas: GasParams) -> np.ndarray:
    rho, u, v, p = primitive_from_conserved(q, gas)
    q = np.asarray(q, float)
    return np.stack(
        [q[..., 1], q[..., 1] * u + p, q[..., 2] * u, u * (q[..., 3] + p)], axis=-1
    )


def flux_y(q, gas: GasParams) -> np.ndarray:
    rho, u, v, p = primitive_from_conserved(q, gas)
    q = np.asarray(q, float)
    return np.stack(
        [q[..., 2], q[..., 1] * v, q[..., 2] * v + p, v * (q[..., 3] + p)], axis=-1
    )


def swap_uv(q) -> np.ndarray:
    """Exchange the two momentum components."""
    q = np.asarray(q, float)
    return q[..., [0, 2, 1, 3]]


# Permutation matrix exchanging components 2 and 3 (0-based 1 and 2).
SWAP = np.eye(4)[[0, 2, 1, 3]]


def jacobian_x(q, gas: GasParams) -> np.ndarray:
    """Analytic d(flux_x)/dq, shape (..., 4, 4)."""
    rho, u, v, p = primitive_from_conserved(q, gas)
    g = gas.gamma
    ek = 0.5 * (u * u + v * v)
    H = (np.asarray(q, float)[..., 3] + p) / rho
    z = np.zeros_like(u)
    o = np.ones_like(u)
    row0 = np.stack([z, o, z, z], axis=-1)
    row1 = np.stack([(g - 1.0) * ek - u * u, (3.0 - g) * u, -(g - 1.0) * v, (g - 1.0) * o], axis=-1)
    row2 = np.stack([-u * v, v, u, z], axis=-1)
    row3 = np.stack(
        [u * ((g - 1.0) * ek - H), H - (g - 1.0) * u * u, -(g - 1.0) * u * v, g * u], axis=-1
    )
    return np.stack([row0, row1, row2, row3], axis=-2)


def jacobian_y(q, gas: GasParams) -> np.ndarray:
    """d(flux_y)/dq via the u<->v swap symmetry: S J^x(swap q) S."""
    jx = jacobian_x(swap_uv(q), gas)
    return SWAP @ jx @ SWAP


def eigenbasis_x(q, gas: GasParams):
    """Right eigenvectors R and eigenvalues (u-c, u, u, u+c) of jacobian_x.

    Returns (lam, R) with lam shape (..., 4) and R shape (..., 4, 4);
    columns of R are the eigenvectors.
    """
    rho, u, v, p = primitive_from_conserved(q, gas)
    c = sound_speed(q, gas)
    H = (np.asarray(q, float)[..., 3] + p) / rho
    ek = 0.5 * (u * u + v * v)
    z = np.zeros_like(u)
    o = np.ones_like(u)
    r1 = np.stack([o, u - c, v, H - u * c], axis=-1)
    r2 = np.stack([o, u, v, ek], axis=-1)
    r3 = np.stack([z, z, o, v], axis=-1)
    r4 = np.stack([o, u + c, v, H + u * c], axis=-1)
    R = np.stack([r1, r2, r3, r4], axis=-1)
    lam = np.stack([u - c, u, u, u + c], axis=-1)
    return lam, R


def split_with_basis(lam, R) -> JacobianSplit:
    """Split R diag(lam) R^-1 by eigenvalue sign, batched over leading axes."""
    lam = np.asarray(lam, float)
    R = np.asarray(R, float)
    if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(R))):
        raise InvalidStateError("non-finite eigenstructure")
    Rinv = np.linalg.inv(R)
    lp = np.maximum(lam, 0.0)
    lm = np.minimum(lam, 0.0)
    j_plus = (R * lp[..., None, :]) @ Rinv
    j_minus = (R * lm[..., None, :]) @ Rinv
    return JacobianSplit(j_plus=j_plus, j_minus=j_minus)


def split_jacobian_x(q, gas: GasParams) -> JacobianSplit:
    lam, R = eigenbasis_x(q, gas)
    return split_with_basis(lam, R)


def split_jacobian_y(q, gas: GasParams) -> JacobianSplit:
    """Split of J^y from the swap symmetry of the x split."""
    s = split_jacobian_x(swap_uv(q), gas)
    return JacobianSplit(j_plus=SWAP @ s.j_plus @ SWAP, j_minus=SWAP @ s.j_minus @ SWAP)


def max_wave_speeds(q, gas: GasParams):
    """Directional characteristic speed bounds (|u|+c, |v|+c)."""
    rho, u, v, _ = primitive_from_conserved(q, gas)
    c = sound_speed(q, gas)
    return np.abs(u) + c, np.abs(v) + c

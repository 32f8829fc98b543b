"""Semi-discrete Active Flux solver for the 2D compressible Euler equations.

Degrees of freedom are cell averages plus globally shared point values at
cell corners and edge midpoints.  Cell averages are updated conservatively
with Simpson-rule interface fluxes; point values are updated with upwinded
finite differences obtained by differentiating a continuous reconstruction.
A piecewise reconstruction with hat edges and plateau cells enforces a
discrete maximum principle.
"""

from .euler import GasParams, PrimitiveState, JacobianSplit
from .grid import BoundaryCondition, GridSpec, DofField

__all__ = [
    "GasParams",
    "PrimitiveState",
    "JacobianSplit",
    "BoundaryCondition",
    "GridSpec",
    "DofField",
]

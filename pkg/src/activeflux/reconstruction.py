"""Continuous per-cell reconstruction with maximum-principle limiting.

A cell is reconstructed from its 8 boundary point values and its average.
Each edge profile is either the interpolating parabola or, when that
parabola would create an artificial extremum, a continuous piecewise-linear
hat.  The cell interior is a sum of four edge-basis functions (piecewise
biparabolic, split into halves/quadrants as hat edges require).  If the
interior overshoots the min/max of the boundary values while the average
lies strictly between them, the cell is rebuilt as a plateau: a constant
central rectangle joined to the edge profiles by linear interpolation along
four trapezes.

All interior formulas live in reference coordinates (xh, yh) in
[-1/2, 1/2]^2; anisotropic cells only rescale derivatives.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grid import SW, S, SE, W, E, NW, N, NE


class EdgeKind(enum.Enum):
    PARABOLIC = 0
    HAT = 1


@dataclass(frozen=True)
class EdgeKinds:
    n: EdgeKind
    s: EdgeKind
    e: EdgeKind
    w: EdgeKind

    def as_tuple(self):
        return (self.n, self.s, self.e, self.w)


def classify_edge(left, mid, right) -> EdgeKind:
    """Classify one edge from its (endpoint, midpoint, endpoint) values.

    Hat when the triple is not strictly monotone and the endpoints differ,
    or when it is strictly monotone but the interpolating parabola has an
    interior extremum (|mid - (l+r)/2| > |r - l| / 4, strict).
    """
    mono = (left < mid < right) or (left > mid > right)
    if mono:
        if abs(mid - 0.5 * (left + right)) > 0.25 * abs(right - left):
            return EdgeKind.HAT
        return EdgeKind.PARABOLIC
    if left != right:
        return EdgeKind.HAT
    return EdgeKind.PARABOLIC


def classify_edges_array(left, mid, right) -> np.ndarray:
    """Vectorized classify_edge; returns a boolean array (True = hat)."""
    left = np.asarray(left, float)
    mid = np.asarray(mid, float)
    right = np.asarray(right, float)
    mono = ((left < mid) & (mid < right)) | ((left > mid) & (mid > right))
    extremum = np.abs(mid - 0.5 * (left + right)) > 0.25 * np.abs(right - left)
    return np.where(mono, extremum, left != right)


# ---------------------------------------------------------------------------
# Biparabolic pieces.
#
# Coefficients are stored as a (3, 3) array c with
#   value(x, y) = sum_{m,n} c[m, n] x^m y^n,   m, n <= 2.
# A piece region is a sign pair (rx, ry) with entries in {-1, 0, +1}:
# 0 means unconstrained, -1 means coordinate < 0, +1 means coordinate >= 0.
# ---------------------------------------------------------------------------

WHOLE = (0, 0)


@dataclass(frozen=True)
class BiparabolicPiece:
    coeffs: np.ndarray  # (3, 3)
    region: tuple

    def contains(self, x, y):
        rx, ry = self.region
        ok = np.ones(np.broadcast(x, y).shape, dtype=bool)
        if rx:
            ok &= (x >= 0) if rx > 0 else (x < 0)
        if ry:
            ok &= (y >= 0) if ry > 0 else (y < 0)
        return ok


def _coeffs_from_a(a):
    """Map the flat coefficient list (a0..a8) onto the (3, 3) layout."""
    c = np.zeros((3, 3))
    c[:, 0] = a[0:3]
    c[:, 1] = a[3:6]
    c[:, 2] = a[6:9]
    return c


def _poly_eval(c, x, y):
    px0 = c[0, 0] + x * (c[1, 0] + x * c[2, 0])
    px1 = c[0, 1] + x * (c[1, 1] + x * c[2, 1])
    px2 = c[0, 2] + x * (c[1, 2] + x * c[2, 2])
    return px0 + y * (px1 + y * px2)


def _poly_dx(c, x, y):
    px0 = c[1, 0] + 2 * x * c[2, 0]
    px1 = c[1, 1] + 2 * x * c[2, 1]
    px2 = c[1, 2] + 2 * x * c[2, 2]
    return px0 + y * (px1 + y * px2)


def _poly_dy(c, x, y):
    px1 = c[0, 1] + x * (c[1, 1] + x * c[2, 1])
    px2 = c[0, 2] + x * (c[1, 2] + x * c[2, 2])
    return px1 + 2 * y * px2


# ---------------------------------------------------------------------------
# Edge-basis functions (W frame).  Slots: s1 interpolated at (-1/2, -1/2),
# s2 at (-1/2, 0), s3 at (-1/2, 1/2); all other boundary values zero and the
# average prescribed.  Case formulas keyed on the primary edge kind and the
# kinds of the two neighbouring edges (at the s1 and s3 corners).
# ---------------------------------------------------------------------------

PAR = EdgeKind.PARABOLIC
HAT = EdgeKind.HAT


def _piece(qc, s2, a4, a5, a7, a8, region):
    a = [qc, -s2, -2 * (2 * qc - s2), 0.0, a4, a5, -4 * qc, a7, a8]
    return BiparabolicPiece(_coeffs_from_a(a), region)


def edge_basis_w(s1, s2, s3, kind_w, kind_s, kind_n, qbar):
    """W-frame edge-basis function in reference coordinates.

    Returns (pieces, q_c) where the pieces tile the unit cell and q_c is the
    value at the cell center, fixed by the average condition.
    """
    if kind_w is PAR:
        if kind_n is PAR and kind_s is PAR:
            qc = (36 * qbar - s3 - s1 - 4 * s2) / 16
            pieces = [
                _piece(qc, s2, -(s3 - s1), 2 * (s3 - s1),
                       -2 * (s3 + s1 - 2 * s2), 4 * (4 * qc + s3 + s1 - 2 * s2), WHOLE)
            ]
        elif kind_n is HAT and kind_s is HAT:
            qc = (72 * qbar - 3 * (s3 + s1) - 8 * s2) / 32
            pieces = [
                _piece(qc, s2, -2 * (s3 - s1), 0.0,
                       -4 * (s3 + s1 - s2), 8 * (2 * qc - s2), (-1, 0)),
                _piece(qc, s2, 0.0, 0.0, 4 * s2, 8 * (2 * qc - s2), (1, 0)),
            ]
        elif kind_n is HAT:  # S parabolic
            qc = (72 * qbar - 3 * s3 - 2 * s1 - 8 * s2) / 32
            pieces = [
                _piece(qc, s2, -(2 * s3 - s1), -2 * s1,
                       -2 * (2 * s3 + s1 - 2 * s2), 4 * (4 * qc + s1 - 2 * s2), (-1, 0)),
                _piece(qc, s2, s1, -2 * s1,
                       -2 * (s1 - 2 * s2), 4 * (4 * qc + s1 - 2 * s2), (1, 0)),
            ]
        else:  # S hat, N parabolic
            qc = (72 * qbar - 2 * s3 - 3 * s1 - 8 * s2) / 32
            pieces = [
                _piece(qc, s2, -(s3 - 2 * s1), 2 * s3,
                       -2 * (s3 + 2 * s1 - 2 * s2), 4 * (4 * qc + s3 - 2 * s2), (-1, 0)),
                _piece(qc, s2, -s3, 2 * s3,
                       -2 * (s3 - 2 * s2), 4 * (4 * qc + s3 - 2 * s2), (1, 0)),
            ]
        return pieces, qc

    # W hat: split along y = 0; a hat neighbour splits its half into quadrants.
    if kind_n is PAR:
        top_const = (s3 + s2) / 24
    else:
        top_const = (35 * s3 + s1 + 22 * s2) / 576
    if kind_s is PAR:
        bot_const = (s1 + s2) / 24
    else:
        bot_const = (s3 + 35 * s1 + 22 * s2) / 576
    qc = 2.25 * (qbar - top_const - bot_const)

    pieces = []
    if kind_n is PAR:
        pieces.append(
            _piece(qc, s2, -2 * (s3 - s2), 4 * (s3 - s2), 0.0, 16 * qc, (0, 1))
        )
    else:
        pieces.append(
            _piece(qc, s2, -(3 * s3 - 2 * s2), 2 * (s3 - 2 * s2),
                   -2 * s3, 4 * (4 * qc - s3), (-1, 1))
        )
        pieces.append(
            _piece(qc, s2, s1, -2 * s1,
                   -2 * (s1 - 2 * s2), 4 * (4 * qc + s1 - 2 * s2), (1, 1))
        )
    if kind_s is PAR:
        pieces.append(
            _piece(qc, s2, 2 * (s1 - s2), -4 * (s1 - s2), 0.0, 16 * qc, (0, -1))
        )
    else:
        pieces.append(
            _piece(qc, s2, 3 * s1 - 2 * s2, -2 * (s1 - 2 * s2),
                   -2 * s1, 4 * (4 * qc - s1), (-1, -1))
        )
        pieces.append(
            _piece(qc, s2, -s3, 2 * s3,
                   -2 * (s3 - 2 * s2), 4 * (4 * qc + s3 - 2 * s2), (1, -1))
        )
    return pieces, qc


# Rotations taking the W frame into the frame of each edge: the W-frame
# coordinates expressed in cell coordinates, (xw, yw) = (mxx*x + mxy*y, ...).
_ROTATIONS = {
    "w": ((1, 0), (0, 1)),
    "s": ((0, 1), (-1, 0)),   # q_S(x, y) = q_W(y, -x)
    "n": ((0, -1), (1, 0)),   # q_N(x, y) = q_W(-y, x)
    "e": ((-1, 0), (0, -1)),  # q_E(x, y) = q_W(-x, -y)
}


def _rotate_piece(piece: BiparabolicPiece, edge: str) -> BiparabolicPiece:
    (axx, axy), (ayx, ayy) = _ROTATIONS[edge]
    if edge == "w":
        return piece
    c = piece.coeffs
    new = np.zeros((3, 3))
    # xw = axx*x + axy*y with exactly one nonzero entry of value +-1; same
    # for yw, so monomials map to monomials.
    for m in range(3):
        for n in range(3):
            if c[m, n] == 0.0:
                continue
            # term c * xw^m * yw^n
            if axy == 0:
                mx, sx = m, axx ** m
                my, sy = n, ayy ** n
                new[mx, my] += c[m, n] * sx * sy
            else:
                # xw depends on y, yw on x: exponents swap.
                new[n, m] += c[m, n] * (axy ** m) * (ayx ** n)
    rx, ry = piece.region
    # Region constraints transform with the inverse map; for sign constraints
    # it suffices to push the signs through the rotation.
    if axy == 0:
        new_region = (rx * axx, ry * ayy)
    else:
        new_region = (ry * ayx, rx * axy)
    return BiparabolicPiece(new, new_region)


def edge_basis(edge: str, v1, v2, v3, kind_primary, kind_nb1, kind_nb3, qbar):
    """Edge-basis function of the given edge, in cell coordinates.

    (v1, v2, v3) run counterclockwise along the edge (for W: SW, W, NW);
    kind_nb1/kind_nb3 are the kinds of the edges adjacent at the v1/v3
    corners.
    """
    pieces, qc = edge_basis_w(v1, v2, v3, kind_primary, kind_nb1, kind_nb3, qbar)
    return [_rotate_piece(p, edge) for p in pieces], qc


# ---------------------------------------------------------------------------
# Cell reconstructions.
# ---------------------------------------------------------------------------


@dataclass
class CellReconstruction:
    boundary: np.ndarray  # (8,) in (SW, S, SE, W, E, NW, N, NE) order
    qbar: float
    kinds: EdgeKinds
    dx: float = 1.0
    dy: float = 1.0


_QUADRANTS = ((-1, -1), (1, -1), (-1, 1), (1, 1))


@dataclass
class PwBiparabolic(CellReconstruction):
    pieces: tuple = ()
    q_center: float = 0.0

    def regions(self):
        return [p.region for p in self.pieces]

    def _coeffs_at(self, x, y):
        """Coefficient array per evaluation point, shape x.shape + (3, 3)."""
        x = np.asarray(x, float)
        out = np.zeros(x.shape + (3, 3))
        done = np.zeros(x.shape, dtype=bool)
        for p in self.pieces:
            mask = p.contains(x, y) & ~done
            out[mask] = p.coeffs
            done |= mask
        return out

    def eval_ref(self, x, y):
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        if len(self.pieces) == 1:
            return _poly_eval(self.pieces[0].coeffs, x, y)
        x, y = np.broadcast_arrays(x, y)
        out = np.empty(x.shape)
        done = np.zeros(x.shape, dtype=bool)
        for p in self.pieces:
            mask = p.contains(x, y) & ~done
            if np.any(mask):
                out[mask] = _poly_eval(p.coeffs, x[mask], y[mask])
                done |= mask
        return out


@dataclass
class Plateau(CellReconstruction):
    eta: float = 0.25
    q_p: float = 0.0

    def regions(self):
        return ["plateau", "trapeze_w", "trapeze_e", "trapeze_s", "trapeze_n"]

    def eval_ref(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        half = 0.5 - self.eta
        b = self.boundary
        out = np.full(x.shape, self.q_p)
        ax, ay = np.abs(x), np.abs(y)
        outside = np.maximum(ax, ay) > half
        in_x = outside & (ax >= ay)
        in_y = outside & ~in_x
        sel_w = in_x & (x < 0)
        sel_e = in_x & (x >= 0)
        sel_s = in_y & (y < 0)
        sel_n = in_y & (y >= 0)
        # Rotations (43)-(45) map each trapeze into the W frame.
        for sel, vals, kind, xw, yw in (
            (sel_w, (b[SW], b[W], b[NW]), self.kinds.w, x, y),
            (sel_s, (b[SE], b[S], b[SW]), self.kinds.s, y, -x),
            (sel_n, (b[NW], b[N], b[NE]), self.kinds.n, -y, x),
            (sel_e, (b[NE], b[E], b[SE]), self.kinds.e, -x, -y),
        ):
            if np.any(sel):
                out[sel] = _w_trapeze_eval(
                    vals, kind, xw[sel], yw[sel], self.eta, self.q_p
                )
        return out


def _w_trapeze_eval(vals, kind, x, y, eta, q_p):
    """Value on the W trapeze (x in [-1/2, -(1/2-eta)], |y| <= -x)."""
    s1, s2, s3 = vals
    t = 0.5 + x  # distance from the edge; t in [0, eta] on the trapeze
    if kind is PAR:
        g = (s2 / (2 * eta)
             - (s3 - s1) * y / (4 * eta * x)
             + (s3 + s1 - 2 * s2) * y * y / (4 * eta * x * x))
        return q_p * t / eta + 2 * (eta - t) * g
    ratio_n = (s3 - s2) * y / x
    ratio_s = (s1 - s2) * y / x
    top = s2 - ratio_n + t * (q_p - s2 + ratio_n) / eta
    bot = s2 + ratio_s + t * (q_p - s2 - ratio_s) / eta
    return np.where(y >= 0, top, bot)


def assemble_pw_biparabolic(boundary, qbar, kinds: EdgeKinds, dx=1.0, dy=1.0) -> PwBiparabolic:
    """Sum of the four edge-basis functions plus a constant.

    Corner values are halved (each corner is shared by two edges), each basis
    carries a quarter of the average defect, and the mean of the boundary
    values closes the cell average exactly.
    """
    b = np.asarray(boundary, float)
    d = b - b.mean()
    dqbar = qbar - b.mean()
    qb4 = dqbar / 4.0
    all_pieces = []
    for edge, v1, v2, v3, kp, k1, k3 in (
        ("w", d[SW] / 2, d[W], d[NW] / 2, kinds.w, kinds.s, kinds.n),
        ("s", d[SE] / 2, d[S], d[SW] / 2, kinds.s, kinds.e, kinds.w),
        ("n", d[NW] / 2, d[N], d[NE] / 2, kinds.n, kinds.w, kinds.e),
        ("e", d[NE] / 2, d[E], d[SE] / 2, kinds.e, kinds.n, kinds.s),
    ):
        pieces, _ = edge_basis(edge, v1, v2, v3, kp, k1, k3, qb4)
        all_pieces.append(pieces)

    const = b.mean()
    quads = []
    for qx, qy in _QUADRANTS:
        c = np.zeros((3, 3))
        c[0, 0] = const
        for pieces in all_pieces:
            for p in pieces:
                rx, ry = p.region
                if (rx == 0 or rx == qx) and (ry == 0 or ry == qy):
                    c = c + p.coeffs
                    break
        quads.append(c)
    if all(np.array_equal(quads[0], c) for c in quads[1:]):
        final = (BiparabolicPiece(quads[0], WHOLE),)
    else:
        final = tuple(
            BiparabolicPiece(c, r) for c, r in zip(quads, _QUADRANTS)
        )
    return PwBiparabolic(
        boundary=b, qbar=float(qbar), kinds=kinds, dx=dx, dy=dy,
        pieces=final, q_center=float(quads[0][0, 0]),
    )


def _to_ref(recon, x, y):
    xh = np.asarray(x, float) / recon.dx
    yh = np.asarray(y, float) / recon.dy
    tol = 1e-12
    if np.any(np.abs(xh) > 0.5 + tol) or np.any(np.abs(yh) > 0.5 + tol):
        raise ValueError("evaluation point outside the cell")
    return np.clip(xh, -0.5, 0.5), np.clip(yh, -0.5, 0.5)


def evaluate(recon: CellReconstruction, x, y):
    """Evaluate at cell-local physical coordinates; scalars or arrays."""
    xh, yh = _to_ref(recon, x, y)
    out = recon.eval_ref(xh, yh)
    if np.isscalar(x) or (isinstance(x, float)) and np.ndim(out) == 0:
        return float(out)
    return out


# Boundary dof locations in reference coordinates.
_DOF_REF = {
    SW: (-0.5, -0.5), S: (0.0, -0.5), SE: (0.5, -0.5),
    W: (-0.5, 0.0), E: (0.5, 0.0),
    NW: (-0.5, 0.5), N: (0.0, 0.5), NE: (0.5, 0.5),
}

# For each edge: (index triple counterclockwise-consistent, coordinate axis
# along the edge).  Triples run in +x or +y direction.
EDGE_TRIPLES = {
    "w": ((SW, W, NW), "y"),
    "e": ((SE, E, NE), "y"),
    "s": ((SW, S, SE), "x"),
    "n": ((NW, N, NE), "x"),
}


def edge_profile_slope(left, mid, right, kind: EdgeKind, t, side="centered"):
    """Slope of an edge profile at parameter t in {-1/2, 0, 1/2} (reference).

    For a hat at its apex (t=0) the two one-sided slopes differ; 'centered'
    returns their mean, which equals the parabola's centered slope (r-l).
    """
    if kind is PAR:
        return (right - left) + 4 * t * (right + left - 2 * mid)
    if t < 0:
        return 2 * (mid - left)
    if t > 0:
        return 2 * (right - mid)
    if side == "plus":
        return 2 * (right - mid)
    if side == "minus":
        return 2 * (mid - left)
    return float(right - left)


def _dof_index(recon, x, y):
    xh = x / recon.dx
    yh = y / recon.dy
    for idx, (rx, ry) in _DOF_REF.items():
        if abs(xh - rx) < 1e-9 and abs(yh - ry) < 1e-9:
            return idx, rx, ry
    raise ValueError(f"({x}, {y}) is not one of the 8 boundary dof locations")


def derivative(recon: CellReconstruction, x, y, axis: str, side: str = "centered"):
    """One-sided/centered partial derivative at one of the 8 boundary dofs.

    side 'plus'/'minus' selects the piece on that side of the location along
    the requested axis (both measured in the cell frame); requesting a side
    that leaves the cell raises.
    """
    if axis not in ("x", "y") or side not in ("plus", "minus", "centered"):
        raise ValueError(f"bad axis/side {axis!r}/{side!r}")
    idx, rx, ry = _dof_index(recon, x, y)
    coord = rx if axis == "x" else ry
    if coord == 0.5 and side == "plus" or coord == -0.5 and side == "minus":
        raise ValueError("requested side lies outside the cell")
    if side == "centered" and coord == 0.5:
        side = "minus"
    elif side == "centered" and coord == -0.5:
        side = "plus"

    if isinstance(recon, PwBiparabolic):
        return _pw_derivative(recon, rx, ry, axis, side)
    return _plateau_derivative(recon, idx, rx, ry, axis, side)


def _pw_piece_at(recon: PwBiparabolic, px, py):
    for p in recon.pieces:
        if p.contains(np.asarray(px), np.asarray(py)):
            return p
    raise AssertionError("pieces do not tile the cell")


def _pw_derivative(recon: PwBiparabolic, rx, ry, axis, side):
    eps = 1e-6

    def one_sided(s):
        d = eps if s == "plus" else -eps
        px = rx + (d if axis == "x" else 0.0)
        py = ry + (d if axis == "y" else 0.0)
        # Nudge the other coordinate into the cell to resolve seams.
        if axis == "x":
            py = py - np.sign(py) * eps
        else:
            px = px - np.sign(px) * eps
        p = _pw_piece_at(recon, px, py)
        if axis == "x":
            return _poly_dx(p.coeffs, rx, ry) / recon.dx
        return _poly_dy(p.coeffs, rx, ry) / recon.dy

    if side == "centered":
        return 0.5 * (one_sided("plus") + one_sided("minus"))
    return one_sided(side)


def _plateau_derivative(recon: Plateau, idx, rx, ry, axis, side):
    b = recon.boundary
    # Normal derivative at an edge midpoint: linear interpolation between the
    # edge value and the plateau over the distance eta.
    if idx == W and axis == "x":
        return (recon.q_p - b[W]) / recon.eta / recon.dx
    if idx == E and axis == "x":
        return (b[E] - recon.q_p) / recon.eta / recon.dx
    if idx == S and axis == "y":
        return (recon.q_p - b[S]) / recon.eta / recon.dy
    if idx == N and axis == "y":
        return (b[N] - recon.q_p) / recon.eta / recon.dy

    # All remaining cases are tangential: the boundary restriction is the
    # edge profile itself.
    for edge, ((i1, i2, i3), ax) in EDGE_TRIPLES.items():
        if ax != axis or idx not in (i1, i2, i3):
            continue
        kind = getattr(recon.kinds, edge)
        t = {i1: -0.5, i2: 0.0, i3: 0.5}[idx]
        scale = recon.dx if axis == "x" else recon.dy
        return edge_profile_slope(b[i1], b[i2], b[i3], kind, t, side) / scale
    raise AssertionError("unreachable dof/axis combination")


def sample_points(recon: CellReconstruction, n: int = 17):
    """Sample lattice for the maximum-principle test: n x n uniform points
    over the cell plus all piece-region corner points (reference coords)."""
    t = np.linspace(-0.5, 0.5, n)
    gx, gy = np.meshgrid(t, t, indexing="ij")
    pts = [np.stack([gx.ravel(), gy.ravel()], axis=-1)]
    corners = {(-0.5, -0.5), (0.5, -0.5), (-0.5, 0.5), (0.5, 0.5)}
    if isinstance(recon, PwBiparabolic):
        if len(recon.pieces) > 1:
            corners |= {(0.0, 0.0), (0.0, -0.5), (0.0, 0.5), (-0.5, 0.0), (0.5, 0.0)}
    else:
        h = 0.5 - recon.eta
        corners |= {(sx * h, sy * h) for sx in (-1, 1) for sy in (-1, 1)}
    pts.append(np.array(sorted(corners)))
    return np.concatenate(pts, axis=0)


def violates_max_principle(recon: CellReconstruction, m: float, M: float) -> bool:
    """True if any sampled value leaves [m, M] beyond a relative tolerance."""
    if not m <= M:
        raise ValueError("need m <= M")
    pts = sample_points(recon)
    vals = recon.eval_ref(pts[:, 0], pts[:, 1])
    tol = 1e-12 * max(1.0, abs(m), abs(M))
    return bool(np.any(vals < m - tol) or np.any(vals > M + tol))


# ---------------------------------------------------------------------------
# Plateau construction.
# ---------------------------------------------------------------------------


def _average_poly(boundary, kinds: EdgeKinds):
    """Cell average of the plateau reconstruction as q_p*C(eta) + D(eta).

    Returns (C2, C1, C0, D2, D1) with C(eta) = C0 + C1*eta + C2*eta^2 and
    D(eta) = D1*eta + D2*eta^2, assembled from the exact region integrals.
    """
    b = np.asarray(boundary, float)
    D1 = 0.0
    D2 = 0.0
    for edge, ((i1, i2, i3), _) in EDGE_TRIPLES.items():
        kind = getattr(kinds, edge)
        c1, e, c2 = b[i1], b[i2], b[i3]
        if kind is PAR:
            s = 4 * e + c1 + c2
            D1 += s / 12.0
            D2 += -s / 18.0
        else:
            s = c1 + c2 + 2 * e
            D1 += s / 8.0
            D2 += -s / 12.0
    return (4.0 / 3.0, -2.0, 1.0, D2, D1)


def plateau_value(boundary, qbar, kinds: EdgeKinds, eta: float) -> float:
    """Plateau value q_p making the reconstruction average equal qbar."""
    C2, C1, C0, D2, D1 = _average_poly(boundary, kinds)
    C = C0 + C1 * eta + C2 * eta * eta
    D = D1 * eta + D2 * eta * eta
    return (qbar - D) / C


def plateau(boundary, qbar, kinds: EdgeKinds, dx=1.0, dy=1.0) -> Plateau:
    """Plateau reconstruction; requires min(boundary) <= qbar <= max(boundary).

    For each bound mu in {m, M} the equation q_p(eta) = mu is quadratic in
    eta; the smallest root in (0, 1/2), halved, keeps q_p strictly inside
    (m, M).  Without such a root eta = 1/4.  The maximum principle holds for
    strictly admissible averages; equality (e.g. uniform data, where q_p
    reduces to qbar for every eta) is accepted as a degenerate case.
    """
    b = np.asarray(boundary, float)
    m = float(b.min())
    M = float(b.max())
    if not (m <= qbar <= M):
        raise ValueError(f"plateau needs m <= qbar <= M, got {m}, {qbar}, {M}")
    C2, C1, C0, D2, D1 = _average_poly(b, kinds)
    roots = []
    for mu in (m, M):
        # mu*C(eta) + D(eta) - qbar = 0
        a2 = mu * C2 + D2
        a1 = mu * C1 + D1
        a0 = mu * C0 - qbar
        if a2 == 0.0:
            if a1 != 0.0:
                roots.append(-a0 / a1)
            continue
        disc = a1 * a1 - 4 * a2 * a0
        if disc < 0:
            continue
        sq = np.sqrt(disc)
        # Cancellation-free form: the root nearest zero comes from a0 / (a2 * r1).
        r1 = (-a1 - sq) / (2 * a2) if a1 >= 0 else (-a1 + sq) / (2 * a2)
        roots.append(r1)
        roots.append(a0 / (a2 * r1) if r1 != 0.0 else -a1 / a2)
    valid = [r for r in roots if 0.0 < r < 0.5]
    eta = min(valid) / 2.0 if valid else 0.25
    q_p = plateau_value(b, qbar, kinds, eta)
    return Plateau(boundary=b, qbar=float(qbar), kinds=kinds, dx=dx, dy=dy,
                   eta=float(eta), q_p=float(q_p))


def classify_cell_edges(boundary) -> EdgeKinds:
    b = np.asarray(boundary, float)
    return EdgeKinds(
        n=classify_edge(b[NW], b[N], b[NE]),
        s=classify_edge(b[SW], b[S], b[SE]),
        e=classify_edge(b[SE], b[E], b[NE]),
        w=classify_edge(b[SW], b[W], b[NW]),
    )


def reconstruct_cell(boundary, qbar, dx=1.0, dy=1.0) -> CellReconstruction:
    """Full reconstruction algorithm: classify edges, assemble the piecewise
    biparabolic interior, and fall back to a plateau when the cell average
    lies strictly between the boundary extremes but the interior does not."""
    b = np.asarray(boundary, float)
    kinds = classify_cell_edges(b)
    pw = assemble_pw_biparabolic(b, qbar, kinds, dx, dy)
    m = float(b.min())
    M = float(b.max())
    # Strict admissibility with a round-off margin: a plateau confined to an
    # interval of round-off width would need a vanishing layer width eta and
    # hence unbounded boundary-layer slopes.  Such cells are already within
    # tolerance of the bound, so they are left unlimited (the same treatment
    # as qbar outside [m, M]).
    tol = 1e-12 * max(1.0, abs(m), abs(M))
    if qbar - m > tol and M - qbar > tol and violates_max_principle(pw, m, M):
        return plateau(b, qbar, kinds, dx, dy)
    return pw

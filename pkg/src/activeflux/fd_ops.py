"""Point-value finite differences and the upwinded point update.

Point values evolve through one-sided derivatives of the continuous per-cell
reconstruction.  For unlimited cells with all-parabolic edges these
derivatives collapse to short closed-form stencils; in general they reduce
to a handful of algebraic identities that hold for every edge-kind
combination:

  * at an edge midpoint, the normal derivative from inside a cell is the
    slope of the parabola through (near edge value, cell center value,
    far edge value), the center value being edge-kind aware;
  * at a corner, the one-sided derivative along an edge direction is the
    end slope of that edge's own profile (parabola or hat);
  * the tangential derivative at an edge midpoint is the centered
    difference of the two nodes bounding the edge.

The point update never differentiates a plateau interior: its boundary
layers have slopes proportional to 1/eta, which diverge as the admissible
gap between the cell average and the boundary extremes closes, and no
explicit integrator tolerates them.  The plateau still defines the cell's
reconstruction for max-principle purposes; limiting reaches the point
update through the edge kinds (hat end slopes, hat-aware center values).

This lets the whole limiter-aware right-hand side be evaluated with array
arithmetic: per-cell edge classification, center values, a linear
max-principle violation test, and closed-form plateau parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import reconstruction as rc
from .euler import (
    GasParams,
    InvalidStateError,
    jacobian_x,
    jacobian_y,
    sound_speed,
    split_jacobian_x,
    split_jacobian_y,
)
from .grid import GHOST, DofField, SW, S, SE, W, E, NW, N, NE


# ---------------------------------------------------------------------------
# Closed-form stencils (unlimited, all-parabolic).
# ---------------------------------------------------------------------------


def closed_form_differences(field: DofField, location, axis: str, side: str):
    """Listed stencil value at a point dof; location = (family, i, j).

    family is 'node', 'xedge' (vertical-edge midpoint at x_i) or 'yedge'
    (horizontal-edge midpoint at y_j).  These are the unlimited
    piecewise-biparabolic forms; they assume all edges parabolic.
    """
    family, i, j = location
    dx, dy = field.spec.dx, field.spec.dy
    node, xedge, yedge, avg = field.node, field.xedge, field.yedge, field.avg

    def center(ci, cj):
        edges = (xedge[ci, cj] + xedge[ci + 1, cj]
                 + yedge[ci, cj] + yedge[ci, cj + 1])
        corners = (node[ci, cj] + node[ci + 1, cj]
                   + node[ci, cj + 1] + node[ci + 1, cj + 1])
        return (36.0 * avg[ci, cj] - 4.0 * edges - corners) / 16.0

    if family == "xedge":
        if axis == "y":
            return (node[i, j + 1] - node[i, j]) / dy
        if side == "plus":  # from the west cell, at its east midpoint
            qc = center(i - 1, j)
            return (3.0 * xedge[i, j] + xedge[i - 1, j] - 4.0 * qc) / dx
        if side == "minus":
            qc = center(i, j)
            return (4.0 * qc - 3.0 * xedge[i, j] - xedge[i + 1, j]) / dx
        raise ValueError(f"bad side {side!r}")
    if family == "yedge":
        if axis == "x":
            return (node[i + 1, j] - node[i, j]) / dx
        if side == "plus":
            qc = center(i, j - 1)
            return (3.0 * yedge[i, j] + yedge[i, j - 1] - 4.0 * qc) / dy
        if side == "minus":
            qc = center(i, j)
            return (4.0 * qc - 3.0 * yedge[i, j] - yedge[i, j + 1]) / dy
        raise ValueError(f"bad side {side!r}")
    if family == "node":
        if axis == "x":
            if side == "plus":
                return (node[i - 1, j] - 4.0 * yedge[i - 1, j]
                        + 3.0 * node[i, j]) / dx
            if side == "minus":
                return (-3.0 * node[i, j] + 4.0 * yedge[i, j]
                        - node[i + 1, j]) / dx
        else:
            if side == "plus":
                return (node[i, j - 1] - 4.0 * xedge[i, j - 1]
                        + 3.0 * node[i, j]) / dy
            if side == "minus":
                return (-3.0 * node[i, j] + 4.0 * xedge[i, j]
                        - node[i, j + 1]) / dy
        raise ValueError(f"bad side {side!r}")
    raise ValueError(f"bad family {family!r}")


# ---------------------------------------------------------------------------
# Vectorized per-cell limiter state.
#
# Cell arrays cover one ghost ring: array index ci = cell index + 1,
# ci in [0, nx+1], so every physical point has both adjacent cells.
# ---------------------------------------------------------------------------


@dataclass
class CellData:
    """Per-cell, per-component reconstruction summary over cells -1..nx."""

    b: np.ndarray         # (8, NX, NY, 4) boundary point values
    qbar: np.ndarray      # (NX, NY, 4)
    hat: dict             # edge name -> (NX, NY, 4) bool
    limited: np.ndarray   # (NX, NY, 4) bool: plateau cells
    q_center: np.ndarray  # (NX, NY, 4) center value of the biparabolic
    eta: np.ndarray       # (NX, NY, 4) plateau width (valid where limited)
    q_p: np.ndarray       # (NX, NY, 4) plateau value (valid where limited)


# Basis slot table: (s1 index, s2 index, s3 index, primary, nb at s1, nb at s3)
_BASES = (
    (SW, W, NW, "w", "s", "n"),
    (SE, S, SW, "s", "e", "w"),
    (NW, N, NE, "n", "w", "e"),
    (NE, E, SE, "e", "n", "s"),
)

_EDGE_CORNERS = {"w": (SW, W, NW), "e": (SE, E, NE),
                 "s": (SW, S, SE), "n": (NW, N, NE)}

_VIOLATION_SAMPLES = 17
_violation_matrices: dict = {}


def _violation_matrix(combo):
    """(P, 9) matrix: sampled reconstruction values as a linear map of
    (8 boundary values, average) for a fixed edge-kind combination."""
    if combo in _violation_matrices:
        return _violation_matrices[combo]
    hn, hs, he, hw = combo
    kinds = rc.EdgeKinds(
        n=rc.HAT if hn else rc.PAR, s=rc.HAT if hs else rc.PAR,
        e=rc.HAT if he else rc.PAR, w=rc.HAT if hw else rc.PAR)
    t = np.linspace(-0.5, 0.5, _VIOLATION_SAMPLES)
    X, Y = np.meshgrid(t, t, indexing="ij")
    cols = []
    for k in range(9):
        b = np.zeros(8)
        qbar = 0.0
        if k < 8:
            b[k] = 1.0
        else:
            qbar = 1.0
        pw = rc.assemble_pw_biparabolic(b, qbar, kinds)
        cols.append(pw.eval_ref(X, Y).ravel())
    V = np.stack(cols, axis=-1)
    _violation_matrices[combo] = V
    return V


def gather_cell_data(field: DofField) -> np.ndarray:
    """Boundary values and averages for cells -1..nx -> (b, qbar)."""
    nx, ny, G = field.spec.nx, field.spec.ny, GHOST
    NX, NY = nx + 2, ny + 2
    lo = G - 1
    nodes, xe, ye = field.nodes, field.xedges, field.yedges
    b = np.empty((8, NX, NY, 4))
    b[SW] = nodes[lo:lo + NX, lo:lo + NY]
    b[SE] = nodes[lo + 1:lo + 1 + NX, lo:lo + NY]
    b[NW] = nodes[lo:lo + NX, lo + 1:lo + 1 + NY]
    b[NE] = nodes[lo + 1:lo + 1 + NX, lo + 1:lo + 1 + NY]
    b[W] = xe[lo:lo + NX, lo:lo + NY]
    b[E] = xe[lo + 1:lo + 1 + NX, lo:lo + NY]
    b[S] = ye[lo:lo + NX, lo:lo + NY]
    b[N] = ye[lo:lo + NX, lo + 1:lo + 1 + NY]
    qbar = field.averages[lo:lo + NX, lo:lo + NY]
    return b, qbar


def compute_cell_data(field: DofField, limiter_on: bool) -> CellData:
    """Vectorized equivalent of reconstruct_cell over all cells."""
    b, qbar = gather_cell_data(field)
    hat = {}
    for edge, (i1, i2, i3) in _EDGE_CORNERS.items():
        # Edge classification exists to serve the limiter; the unlimited
        # scheme is the plain biparabolic with parabolic edge profiles.
        if limiter_on:
            hat[edge] = rc.classify_edges_array(b[i1], b[i2], b[i3])
        else:
            hat[edge] = np.zeros(b[i1].shape, dtype=bool)

    mean_b = b.mean(axis=0)
    d = b - mean_b
    qb4 = (qbar - mean_b) / 4.0
    q_center = mean_b.copy()
    for i1, i2, i3, prim, nb1, nb3 in _BASES:
        s1, s2, s3 = d[i1] / 2.0, d[i2], d[i3] / 2.0
        h1, h3, hp = hat[nb1], hat[nb3], hat[prim]
        w1 = np.where(h1, 3.0, 2.0)
        w3 = np.where(h3, 3.0, 2.0)
        qc_par = (72.0 * qb4 - w3 * s3 - w1 * s1 - 8.0 * s2) / 32.0
        t3 = np.where(h3, (35.0 * s3 + s1 + 22.0 * s2) / 576.0,
                      (s3 + s2) / 24.0)
        t1 = np.where(h1, (s3 + 35.0 * s1 + 22.0 * s2) / 576.0,
                      (s1 + s2) / 24.0)
        qc_hat = 2.25 * (qb4 - t3 - t1)
        q_center += np.where(hp, qc_hat, qc_par)

    shape = qbar.shape
    limited = np.zeros(shape, dtype=bool)
    eta = np.full(shape, 0.25)
    q_p = qbar.copy()
    if not limiter_on:
        return CellData(b, qbar, hat, limited, q_center, eta, q_p)

    m = b.min(axis=0)
    M = b.max(axis=0)
    # Strict admissibility with a round-off margin: a round-off-wide gap
    # between the average and a boundary extreme would force a vanishing
    # plateau layer width and unbounded boundary-layer slopes.
    gap_tol = 1e-12 * np.maximum(1.0, np.maximum(np.abs(m), np.abs(M)))
    cand = (qbar - m > gap_tol) & (M - qbar > gap_tol)
    if np.any(cand):
        combo_idx = (hat["n"].astype(np.int8) * 8 + hat["s"] * 4
                     + hat["e"] * 2 + hat["w"])
        idx = np.nonzero(cand)
        data9 = np.concatenate(
            [b[:, idx[0], idx[1], idx[2]].T, qbar[idx][:, None]], axis=1)
        msub = m[idx]
        Msub = M[idx]
        tol = 1e-12 * np.maximum(1.0, np.maximum(np.abs(msub), np.abs(Msub)))
        combos = combo_idx[idx]
        viol = np.zeros(len(msub), dtype=bool)
        for k in np.unique(combos):
            sel = combos == k
            V = _violation_matrix(((k >> 3) & 1, (k >> 2) & 1,
                                   (k >> 1) & 1, k & 1))
            vals = data9[sel] @ V.T
            viol[sel] = (np.any(vals < (msub[sel] - tol[sel])[:, None], axis=1)
                         | np.any(vals > (Msub[sel] + tol[sel])[:, None], axis=1))
        limited[idx] = viol

    if np.any(limited):
        lidx = np.nonzero(limited)
        bl = b[:, lidx[0], lidx[1], lidx[2]]
        ql = qbar[lidx]
        e_sub, qp_sub = _plateau_params(bl, ql, {
            edge: hat[edge][lidx] for edge in hat})
        eta[lidx] = e_sub
        q_p[lidx] = qp_sub
    return CellData(b, qbar, hat, limited, q_center, eta, q_p)


def _plateau_params(b, qbar, hat):
    """Vectorized plateau (eta, q_p); b is (8, n), qbar (n,), hat edge->(n,)."""
    D1 = np.zeros_like(qbar)
    D2 = np.zeros_like(qbar)
    for edge, (i1, i2, i3) in _EDGE_CORNERS.items():
        c1, e, c2 = b[i1], b[i2], b[i3]
        h = hat[edge]
        s_par = 4.0 * e + c1 + c2
        s_hat = c1 + c2 + 2.0 * e
        D1 += np.where(h, s_hat / 8.0, s_par / 12.0)
        D2 += np.where(h, -s_hat / 12.0, -s_par / 18.0)
    # q_p(eta)*C(eta) + D(eta) = qbar with C = 1 - 2 eta + (4/3) eta^2
    best = np.full(qbar.shape, np.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        for mu in (b.min(axis=0), b.max(axis=0)):
            a2 = mu * (4.0 / 3.0) + D2
            a1 = -2.0 * mu + D1
            a0 = mu - qbar
            disc = a1 * a1 - 4.0 * a2 * a0
            sq = np.sqrt(np.maximum(disc, 0.0))
            r1 = np.where(a1 >= 0, -a1 - sq, -a1 + sq) / (2.0 * a2)
            r2 = np.where(r1 != 0.0, a0 / (a2 * r1), -a1 / a2)
            rlin = -a0 / a1  # a2 == 0 degenerates to a linear equation
            for r in (np.where(a2 != 0.0, r1, rlin),
                      np.where(a2 != 0.0, r2, np.inf)):
                ok = (disc >= 0.0) & np.isfinite(r) & (r > 0.0) & (r < 0.5)
                best = np.where(ok & (r < best), r, best)
    eta = np.where(np.isfinite(best), best / 2.0, 0.25)
    C = 1.0 - 2.0 * eta + (4.0 / 3.0) * eta * eta
    q_p = (qbar - D1 * eta - D2 * eta * eta) / C
    return eta, q_p


# ---------------------------------------------------------------------------
# Per-cell derivative building blocks and the point-value right-hand side.
# ---------------------------------------------------------------------------


def _edge_end_slopes(b, hat, triple):
    """(left-end, right-end) slope of an edge profile, reference coords."""
    i1, i2, i3 = triple
    l, m_, r = b[i1], b[i2], b[i3]
    left = np.where(hat, 2.0 * (m_ - l), 4.0 * m_ - 3.0 * l - r)
    right = np.where(hat, 2.0 * (r - m_), 3.0 * r + l - 4.0 * m_)
    return left, right


def cell_derivatives(field: DofField, limiter_on: bool):
    """All one-sided derivative ingredients, as per-cell arrays.

    Returns (cd, d) where d maps names to (NX, NY, 4) arrays:
      xW, xE: normal x-derivative at the W/E midpoint (from inside);
      yS, yN: normal y-derivative at the S/N midpoint;
      {s,n}xl, {s,n}xr: x-slope at the left/right end of the S/N edge;
      {w,e}yl, {w,e}yr: y-slope at the bottom/top end of the W/E edge.
    """
    cd = compute_cell_data(field, limiter_on)
    dx, dy = field.spec.dx, field.spec.dy
    b, qc = cd.b, cd.q_center
    # Midpoint normals differentiate the piecewise-parabolic interior (the
    # parabola through boundary value, center value and opposite boundary
    # value along the cell midline) for limited and unlimited cells alike.
    # The plateau only replaces the interior for max-principle purposes; its
    # boundary-layer slopes grow like 1/eta and cannot feed an explicit time
    # integrator.  Edge classification still enters through the center value
    # and the hat end slopes below.
    d = {}
    d["xW"] = (4.0 * qc - 3.0 * b[W] - b[E]) / dx
    d["xE"] = (3.0 * b[E] + b[W] - 4.0 * qc) / dx
    d["yS"] = (4.0 * qc - 3.0 * b[S] - b[N]) / dy
    d["yN"] = (3.0 * b[N] + b[S] - 4.0 * qc) / dy
    for edge, scale, kl, kr in (("s", dx, "sxl", "sxr"),
                                ("n", dx, "nxl", "nxr"),
                                ("w", dy, "wyl", "wyr"),
                                ("e", dy, "eyl", "eyr")):
        left, right = _edge_end_slopes(b, cd.hat[edge], _EDGE_CORNERS[edge])
        d[kl] = left / scale
        d[kr] = right / scale
    return cd, d


@dataclass
class PointRhs:
    """Time derivatives of the point values at all physical locations."""

    nodes: np.ndarray   # (nx+1, ny+1, 4)
    xedges: np.ndarray  # (nx+1, ny, 4)
    yedges: np.ndarray  # (nx, ny+1, 4)


def _matvec(J, v):
    return np.einsum("...ij,...j->...i", J, v)


def _check_states(q, gas, what):
    rho = q[..., 0]
    p = (gas.gamma - 1.0) * (q[..., 3]
                             - 0.5 * (q[..., 1] ** 2 + q[..., 2] ** 2) / rho)
    bad = ~np.isfinite(rho) | (rho <= 0) | ~np.isfinite(p) | (p <= 0)
    if np.any(bad):
        loc = tuple(int(ax[0]) for ax in np.nonzero(bad))
        raise InvalidStateError(f"invalid state at {what} {loc}",
                                state=q[loc], location=(what,) + loc)


def point_rhs(field: DofField, limiter_on: bool, gas: GasParams) -> PointRhs:
    """Upwinded right-hand side for all point values.

    Edge midpoints combine the upwinded normal derivative (Jacobian split at
    the point's own value) with an unsplit centered tangential term; nodes
    upwind both axes.
    """
    nx, ny, G = field.spec.nx, field.spec.ny, GHOST
    dx, dy = field.spec.dx, field.spec.dy
    _, d = cell_derivatives(field, limiter_on)
    nodes = field.nodes
    # physical point slices
    q_nodes = nodes[G:G + nx + 1, G:G + ny + 1]
    q_xe = field.xedges[G:G + nx + 1, G:G + ny]
    q_ye = field.yedges[G:G + nx, G:G + ny + 1]
    for q, what in ((q_nodes, "node"), (q_xe, "xedge"), (q_ye, "yedge")):
        _check_states(q, gas, what)

    # Vertical-edge midpoints (x_i, row j), i=0..nx, j=0..ny-1.
    # plus side: east midpoint of the west cell (ci = i); minus side: west
    # midpoint of the east cell (ci = i+1).
    dxp = d["xE"][0:nx + 1, 1:ny + 1]
    dxm = d["xW"][1:nx + 2, 1:ny + 1]
    dyc = (nodes[G:G + nx + 1, G + 1:G + ny + 1]
           - nodes[G:G + nx + 1, G:G + ny]) / dy
    sx = split_jacobian_x(q_xe, gas)
    Jy = jacobian_y(q_xe, gas)
    rhs_xe = -(_matvec(sx.j_plus, dxp) + _matvec(sx.j_minus, dxm)
               + _matvec(Jy, dyc))

    # Horizontal-edge midpoints (col i, y_j), i=0..nx-1, j=0..ny.
    dyp = d["yN"][1:nx + 1, 0:ny + 1]
    dym = d["yS"][1:nx + 1, 1:ny + 2]
    dxc = (nodes[G + 1:G + nx + 1, G:G + ny + 1]
           - nodes[G:G + nx, G:G + ny + 1]) / dx
    sy = split_jacobian_y(q_ye, gas)
    Jx = jacobian_x(q_ye, gas)
    rhs_ye = -(_matvec(sy.j_plus, dyp) + _matvec(sy.j_minus, dym)
               + _matvec(Jx, dxc))

    # Nodes (x_i, y_j), i=0..nx, j=0..ny.  One-sided differences are the end
    # slopes of the four grid-line profiles meeting at the node; the profile
    # through a horizontal edge is shared by the two cells touching it, so
    # either cell's slope array may be read (here: the SW-most valid cell).
    dxp_n = d["nxr"][0:nx + 1, 0:ny + 1]   # N edge of cell (i-1, j-1)
    dxm_n = d["nxl"][1:nx + 2, 0:ny + 1]   # N edge of cell (i, j-1)
    dyp_n = d["eyr"][0:nx + 1, 0:ny + 1]   # E edge of cell (i-1, j-1)
    dym_n = d["eyl"][0:nx + 1, 1:ny + 2]   # E edge of cell (i-1, j)
    sxn = split_jacobian_x(q_nodes, gas)
    syn = split_jacobian_y(q_nodes, gas)
    rhs_n = -(_matvec(sxn.j_plus, dxp_n) + _matvec(sxn.j_minus, dxm_n)
              + _matvec(syn.j_plus, dyp_n) + _matvec(syn.j_minus, dym_n))

    return PointRhs(nodes=rhs_n, xedges=rhs_xe, yedges=rhs_ye)

"""Closed-form point-value differences and the vectorized upwinded RHS."""

import numpy as np
import pytest

from activeflux import reconstruction as rc
from activeflux.euler import GasParams, InvalidStateError, conserved_from_primitive
from activeflux.fd_ops import (
    closed_form_differences,
    compute_cell_data,
    cell_derivatives,
    point_rhs,
)
from activeflux.grid import (
    GHOST,
    BoundaryCondition,
    GridSpec,
    allocate,
    cell_boundary_values,
    fill_ghosts,
    SW, S, SE, W, E, NW, N, NE,
)
from conftest import field_from_function

GAS = GasParams()


def biquadratic_field(spec, coeffs):
    """Global biquadratic per component: q_c(x,y) = sum c[m,n] x^m y^n."""
    def fn(x, y):
        out = np.zeros(x.shape + (4,))
        for c in range(4):
            for m in range(3):
                for n in range(3):
                    out[..., c] += coeffs[c, m, n] * x ** m * y ** n
        return out
    return field_from_function(spec, fn)


def biquadratic_derivative(coeffs, x, y, axis):
    out = np.zeros(4)
    for c in range(4):
        for m in range(3):
            for n in range(3):
                if axis == "x":
                    if m:
                        out[c] += m * coeffs[c, m, n] * x ** (m - 1) * y ** n
                else:
                    if n:
                        out[c] += n * coeffs[c, m, n] * x ** m * y ** (n - 1)
    return out


class TestClosedFormDifferences:
    def test_exact_on_global_biquadratics(self, rng):
        """All stencils reproduce the analytic derivative of a global
        biquadratic exactly (its reconstruction is the function itself)."""
        spec = GridSpec(5, 4, x0=-0.3, y0=0.2, dx=0.23, dy=0.31,
                        bc=BoundaryCondition.EXTRAPOLATE)
        worst = 0.0
        for _ in range(50):
            coeffs = rng.uniform(-1, 1, size=(4, 3, 3))
            f = biquadratic_field(spec, coeffs)
            cases = [("node", 2, 2), ("xedge", 2, 1), ("yedge", 1, 2)]
            for family, i, j in cases:
                if family == "node":
                    x, y = spec.node_xy(i, j)
                elif family == "xedge":
                    x, y = spec.xedge_xy(i, j)
                else:
                    x, y = spec.yedge_xy(i, j)
                for axis in ("x", "y"):
                    exact = biquadratic_derivative(coeffs, x, y, axis)
                    sides = ("plus", "minus")
                    if (family == "xedge" and axis == "y") or \
                       (family == "yedge" and axis == "x"):
                        sides = ("centered",)
                    for side in sides:
                        got = closed_form_differences(f, (family, i, j),
                                                      axis, side)
                        scale = max(1.0, float(np.abs(exact).max()))
                        worst = max(worst, float(
                            np.abs(got - exact).max()) / scale)
        assert worst < 1e-11

    def test_matches_reconstruction_derivative(self, rng):
        """Stencil = one-sided derivative of the assembled reconstruction of
        the adjacent cell, evaluated with the reference (scalar) code path."""
        spec = GridSpec(6, 5, dx=0.17, dy=0.29, bc=BoundaryCondition.PERIODIC)
        f = field_from_function(
            spec, lambda x, y: np.stack(
                [1.0 + 0.05 * np.sin(2 * np.pi * x / (6 * 0.17))
                 + 0.04 * np.cos(2 * np.pi * y / (5 * 0.29)),
                 0.02 * np.sin(2 * np.pi * x / (6 * 0.17)),
                 0.03 * np.cos(2 * np.pi * y / (5 * 0.29)),
                 2.5 + 0.05 * np.sin(2 * np.pi * (x / (6 * 0.17)
                                                  + y / (5 * 0.29)))],
                axis=-1))
        dx, dy = spec.dx, spec.dy

        all_par = rc.EdgeKinds(*([rc.EdgeKind.PARABOLIC] * 4))

        def recon(ci, cj):
            # the closed forms are the unlimited all-parabolic path
            b = cell_boundary_values(f, ci, cj)[:, 0]
            return rc.assemble_pw_biparabolic(
                b, float(f.avg[ci, cj][0]), all_par, dx, dy), None

        # east midpoint of cell (2,2) == xedge (3,2); coordinates are
        # cell-local (relative to the cell center)
        r, _ = recon(2, 2)
        got = closed_form_differences(f, ("xedge", 3, 2), "x", "plus")[0]
        want = rc.derivative(r, dx / 2, 0.0, "x", side="minus")
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)
        # west midpoint of cell (3,2), same physical point, other side
        r, _ = recon(3, 2)
        got = closed_form_differences(f, ("xedge", 3, 2), "x", "minus")[0]
        want = rc.derivative(r, -dx / 2, 0.0, "x", side="plus")
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)
        # node (3,3): x-derivative from the west = end slope along the edge
        r, _ = recon(2, 2)
        got = closed_form_differences(f, ("node", 3, 3), "x", "plus")[0]
        want = rc.derivative(r, dx / 2, dy / 2, "x", side="minus")
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)

    def test_bad_arguments(self):
        spec = GridSpec(4, 4)
        f = fill_ghosts(allocate(spec))
        with pytest.raises(ValueError):
            closed_form_differences(f, ("node", 1, 1), "x", "sideways")
        with pytest.raises(ValueError):
            closed_form_differences(f, ("corner", 1, 1), "x", "plus")


class TestComputeCellData:
    def test_limiter_off_is_all_parabolic(self, rng):
        """Without the limiter every edge is treated as parabolic and no
        cell is replaced by a plateau, however rough the data."""
        spec = GridSpec(6, 6)
        f = allocate(spec)
        for arr in f.arrays():
            arr[...] = rng.uniform(0.5, 2.0, size=arr.shape)
        fill_ghosts(f)
        cd = compute_cell_data(f, limiter_on=False)
        assert not any(h.any() for h in cd.hat.values())
        assert not cd.limited.any()

    def test_matches_reference_reconstruction(self, rng):
        """Vectorized per-cell state agrees with the scalar reference path
        (classification, center value, plateau fallback and parameters)."""
        spec = GridSpec(8, 7, dx=0.13, dy=0.21)
        f = allocate(spec)
        for arr in f.arrays():
            arr[...] = rng.uniform(0.5, 2.0, size=arr.shape)
        fill_ghosts(f)
        cd = compute_cell_data(f, limiter_on=True)
        n_limited = 0
        for ci in range(spec.nx):
            for cj in range(spec.ny):
                ai, aj = ci + 1, cj + 1  # cell array offset (cells -1..nx)
                for comp in range(4):
                    b = cell_boundary_values(f, ci, cj)[:, comp]
                    qbar = float(f.avg[ci, cj][comp])
                    r = rc.reconstruct_cell(b, qbar, spec.dx, spec.dy)
                    kinds = rc.classify_cell_edges(b)
                    for edge in ("w", "e", "s", "n"):
                        assert bool(cd.hat[edge][ai, aj, comp]) == \
                            (getattr(kinds, edge) is rc.EdgeKind.HAT)
                    if isinstance(r, rc.Plateau):
                        n_limited += 1
                        assert cd.limited[ai, aj, comp]
                        assert cd.eta[ai, aj, comp] == pytest.approx(
                            r.eta, rel=1e-13)
                        assert cd.q_p[ai, aj, comp] == pytest.approx(
                            r.q_p, rel=1e-13)
                    else:
                        assert not cd.limited[ai, aj, comp]
                        assert cd.q_center[ai, aj, comp] == pytest.approx(
                            r.q_center, rel=1e-12, abs=1e-12)
        assert n_limited > 10  # rough random data must trigger the limiter


class TestCellDerivatives:
    def test_matches_reference_derivatives(self, rng):
        """Every array entry equals the reference one-sided derivative of
        the edge-kind-aware piecewise-parabolic interior at the matching
        location (the point update never differentiates a plateau: its
        boundary-layer slopes diverge as the layer width shrinks)."""
        spec = GridSpec(6, 5, dx=0.17, dy=0.29)
        f = allocate(spec)
        for arr in f.arrays():
            arr[...] = rng.uniform(0.8, 1.6, size=arr.shape)
        fill_ghosts(f)
        _, d = cell_derivatives(f, limiter_on=True)
        dx, dy = spec.dx, spec.dy
        checks = {  # name -> (x_off, y_off, axis, side)
            "xW": (-0.5, 0.0, "x", "plus"), "xE": (0.5, 0.0, "x", "minus"),
            "yS": (0.0, -0.5, "y", "plus"), "yN": (0.0, 0.5, "y", "minus"),
            "sxl": (-0.5, -0.5, "x", "plus"), "sxr": (0.5, -0.5, "x", "minus"),
            "nxl": (-0.5, 0.5, "x", "plus"), "nxr": (0.5, 0.5, "x", "minus"),
            "wyl": (-0.5, -0.5, "y", "plus"), "wyr": (-0.5, 0.5, "y", "minus"),
            "eyl": (0.5, -0.5, "y", "plus"), "eyr": (0.5, 0.5, "y", "minus"),
        }
        for ci, cj in [(0, 0), (2, 3), (5, 1)]:
            for comp in range(4):
                b = cell_boundary_values(f, ci, cj)[:, comp]
                kinds = rc.classify_cell_edges(b)
                r = rc.assemble_pw_biparabolic(
                    b, float(f.avg[ci, cj][comp]), kinds, dx, dy)
                for name, (ox, oy, axis, side) in checks.items():
                    # sides point into the cell (coordinates are cell-local)
                    want = rc.derivative(r, ox * dx, oy * dy,
                                         axis, side=side)
                    got = d[name][ci + 1, cj + 1, comp]
                    assert got == pytest.approx(want, rel=1e-11, abs=1e-11), \
                        (name, ci, cj, comp)


class TestPointRhs:
    def test_uniform_state_is_steady(self):
        spec = GridSpec(6, 6, dx=0.1, dy=0.1)
        q0 = conserved_from_primitive(1.2, 0.3, -0.1, 0.9, GAS)
        f = allocate(spec)
        for arr in f.arrays():
            arr[...] = q0
        fill_ghosts(f)
        for lim in (False, True):
            rhs = point_rhs(f, lim, GAS)
            assert np.abs(rhs.nodes).max() < 1e-13
            assert np.abs(rhs.xedges).max() < 1e-13
            assert np.abs(rhs.yedges).max() < 1e-13

    def test_advection_consistency_order(self):
        """RHS of a smooth field converges to -(A q_x + B q_y) pointwise at
        second order under grid refinement."""
        def q_fn(x, y):
            rho = 1.0 + 0.1 * np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y)
            u = 0.2 + 0.05 * np.cos(2 * np.pi * x)
            v = -0.1 + 0.05 * np.sin(2 * np.pi * y)
            p = 1.0 + 0.1 * np.cos(2 * np.pi * y)
            return conserved_from_primitive(rho, u, v, p, GAS)

        from activeflux.euler import flux_x, flux_y

        def exact_rhs(x, y, h=1e-6):
            dfx = (flux_x(q_fn(x + h, y), GAS)
                   - flux_x(q_fn(x - h, y), GAS)) / (2 * h)
            dfy = (flux_y(q_fn(x, y + h), GAS)
                   - flux_y(q_fn(x, y - h), GAS)) / (2 * h)
            return -(dfx + dfy)

        errs = []
        for n in (16, 32):
            spec = GridSpec(n, n, dx=1.0 / n, dy=1.0 / n)
            f = field_from_function(spec, q_fn)
            rhs = point_rhs(f, False, GAS)
            err = 0.0
            for (i, j) in [(0, 0), (n // 3, n // 2), (n // 2, n // 4)]:
                x, y = spec.node_xy(i, j)
                err = max(err, float(np.abs(
                    rhs.nodes[i, j] - exact_rhs(x, y)).max()))
            errs.append(err)
        order = np.log2(errs[0] / errs[1])
        assert order > 1.6

    def test_invalid_state_reports_location(self):
        spec = GridSpec(5, 5, dx=0.2, dy=0.2)
        q0 = conserved_from_primitive(1.0, 0.0, 0.0, 1.0, GAS)
        f = allocate(spec)
        for arr in f.arrays():
            arr[...] = q0
        f.xedge[2, 3] = [-1.0, 0.0, 0.0, 2.5]  # negative density
        fill_ghosts(f)
        with pytest.raises(InvalidStateError) as exc:
            point_rhs(f, False, GAS)
        assert exc.value.location[0] == "xedge"
        assert exc.value.state[0] == -1.0

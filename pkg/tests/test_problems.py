"""Initial conditions, the quadrant-state data file, and dof initialization."""

import numpy as np
import pytest

from activeflux.euler import GasParams, conserved_from_primitive
from activeflux.grid import GHOST, BoundaryCondition
from activeflux.problems import (
    DEFAULT_KH_MACH,
    ConfigError,
    gaussian_ic,
    initialize_dofs,
    kh_ic,
    laxliu_ic_factory,
    load_quadrant_states,
    make_problem,
    sod_ic,
    PROBLEM_NAMES,
)

GAS = GasParams()


class TestGaussian:
    def test_peak_value(self):
        rho, u, v, p = gaussian_ic(0.0, 0.0)[..., :].T
        assert rho == pytest.approx(1.5)
        assert p == pytest.approx(1.5)
        assert u == 0.0 and v == 0.0

    def test_profile_formula(self):
        x, y = 0.1, -0.05
        want = 1.0 + 0.5 * np.exp(-80.0 * (x * x + y * y))
        got = gaussian_ic(x, y)
        assert got[0] == pytest.approx(want, rel=1e-15)
        assert got[3] == pytest.approx(want, rel=1e-15)


class TestSod:
    def test_inside_outside_states(self):
        inner = sod_ic(0.5, 0.5)
        outer = sod_ic(0.95, 0.5)
        np.testing.assert_allclose(inner, [1.0, 0.0, 0.0, 1.0])
        np.testing.assert_allclose(outer, [0.125, 0.0, 0.0, 0.1])

    def test_boundary_is_strict(self):
        # exactly on the circle r = 0.3 -> outer state
        on = sod_ic(0.8, 0.5)
        just_in = sod_ic(0.8 - 1e-12, 0.5)
        assert on[0] == 0.125
        assert just_in[0] == 1.0


class TestKelvinHelmholtz:
    def test_wave_crest_values(self):
        """At x = 0 the wave profile is 2, so u = 2 sqrt(1.4) and
        p = 1/M^2 + 2*1.4/M; for M = 1/20 that is 400 + 56 = 456."""
        M = 1.0 / 20.0
        got = kh_ic(0.0, 1.0, M)
        assert got[1] == pytest.approx(2.0 * np.sqrt(1.4), rel=1e-15)
        assert got[3] == pytest.approx(456.0, rel=1e-15)
        assert got[2] == 0.0

    def test_density_offset_jump_at_y4(self):
        M = 1.0 / 20.0
        below = kh_ic(0.3, 4.0 - 1e-12, M)[0]
        above = kh_ic(0.3, 4.0, M)[0]
        # phi jumps from 8M down to -0.4
        assert below - above == pytest.approx(8.0 * M + 0.4, rel=1e-9)

    def test_rejects_nonpositive_mach(self):
        with pytest.raises(ConfigError):
            kh_ic(0.0, 0.0, 0.0)


class TestQuadrantData:
    def test_all_default_configs_present(self):
        states = load_quadrant_states()
        for cid in (6, 11, 12, 16):
            assert cid in states
            assert states[cid].shape == (4, 4)

    def test_config12_values(self):
        s = load_quadrant_states()[12]
        np.testing.assert_allclose(s[0], [0.5313, 0.0, 0.0, 0.4])  # NE
        np.testing.assert_allclose(s[1], [1.0, 0.7276, 0.0, 1.0])  # NW
        np.testing.assert_allclose(s[2], [0.8, 0.0, 0.0, 1.0])     # SW
        np.testing.assert_allclose(s[3], [1.0, 0.0, 0.7276, 1.0])  # SE

    def test_parser_errors(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("12 1 1.0 0.0 0.0\n")
        with pytest.raises(ConfigError, match="6 fields"):
            load_quadrant_states(bad)
        bad.write_text("12 5 1.0 0.0 0.0 1.0\n")
        with pytest.raises(ConfigError, match="quadrant"):
            load_quadrant_states(bad)
        bad.write_text("12 1 1.0 0.0 0.0 1.0\n")
        with pytest.raises(ConfigError, match="missing quadrants"):
            load_quadrant_states(bad)

    def test_comments_and_blank_lines_ignored(self, tmp_path):
        p = tmp_path / "ok.txt"
        p.write_text("# header\n\n"
                     "3 1 1 0 0 1\n3 2 2 0 0 1  # NW\n"
                     "3 3 3 0 0 1\n3 4 4 0 0 1\n")
        s = load_quadrant_states(p)[3]
        np.testing.assert_allclose(s[:, 0], [1, 2, 3, 4])

    def test_quadrant_placement(self):
        ic = laxliu_ic_factory(12)
        s = load_quadrant_states()[12]
        np.testing.assert_allclose(ic(0.75, 0.75), s[0])  # NE
        np.testing.assert_allclose(ic(0.25, 0.75), s[1])  # NW
        np.testing.assert_allclose(ic(0.25, 0.25), s[2])  # SW
        np.testing.assert_allclose(ic(0.75, 0.25), s[3])  # SE

    def test_missing_config_is_refused(self):
        with pytest.raises(ConfigError, match="not in the data file"):
            laxliu_ic_factory(99)


class TestMakeProblem:
    def test_domains_and_bcs(self):
        g = make_problem("gaussian")
        assert (g.x0, g.y0, g.width, g.height) == (-0.5, -0.5, 1.0, 1.0)
        assert g.bc is BoundaryCondition.PERIODIC
        s = make_problem("sod")
        assert (s.x0, s.y0, s.width, s.height) == (0.0, 0.0, 1.0, 1.0)
        assert s.bc is BoundaryCondition.EXTRAPOLATE
        ll = make_problem("laxliu12")
        assert (ll.x0, ll.y0, ll.width, ll.height) == (-0.25, -0.25, 1.5, 1.5)
        assert ll.t_end == 0.25
        kh = make_problem("kh")
        assert kh.width == pytest.approx(2.0 / DEFAULT_KH_MACH)
        assert kh.height == 8.0
        assert kh.bc is BoundaryCondition.PERIODIC_X_EXTRAPOLATE_Y

    def test_all_listed_names_construct(self):
        for name in PROBLEM_NAMES:
            make_problem(name)

    def test_unknown_names(self):
        with pytest.raises(ConfigError):
            make_problem("vortex")
        with pytest.raises(ConfigError):
            make_problem("laxliuX")


class TestInitializeDofs:
    def test_point_values_sample_exactly(self):
        problem = make_problem("gaussian")
        spec = problem.spec(8, 8)
        f = problem.initialize(spec, GAS)
        x, y = spec.node_xy(4, 4)  # domain center
        want = conserved_from_primitive(*gaussian_ic(x, y), GAS)
        np.testing.assert_allclose(f.node[4, 4], want, rtol=1e-15)
        x, y = spec.xedge_xy(2, 3)
        want = conserved_from_primitive(*gaussian_ic(x, y), GAS)
        np.testing.assert_allclose(f.xedge[2, 3], want, rtol=1e-15)

    def test_average_matches_quadrature_oracle(self):
        """For polynomial primitives (conserved data within the rule's
        degree) the stored averages equal an independent 12-point Gauss
        quadrature to rounding; for the Gaussian pulse they agree to the
        quadrature accuracy of the 5x5 rule."""
        from activeflux.grid import GridSpec

        def poly_ic(x, y):
            x, y = np.asarray(x, float), np.asarray(y, float)
            rho = 1.0 + 0.2 * x * x + 0.1 * x * y
            u = 0.3 * y - 0.1 * x * x
            v = 0.2 * x
            p = 1.0 + 0.1 * y * y
            return np.stack(np.broadcast_arrays(rho, u, v, p), axis=-1)

        spec = GridSpec(4, 4, x0=-0.5, y0=-0.5, dx=0.25, dy=0.25)
        f = initialize_dofs(poly_ic, spec, GAS)
        ts, ws = np.polynomial.legendre.leggauss(12)

        def oracle(ic, sp, i, j):
            cx, cy = sp.cell_center(i, j)
            X = cx + 0.5 * sp.dx * ts[:, None]
            Y = cy + 0.5 * sp.dy * ts[None, :]
            q = conserved_from_primitive(*np.moveaxis(ic(X, Y), -1, 0), GAS)
            return 0.25 * np.einsum("a,b,ab...->...", ws, ws, q)

        for (i, j) in [(0, 0), (2, 1), (3, 3)]:
            np.testing.assert_allclose(f.avg[i, j], oracle(poly_ic, spec, i, j),
                                       rtol=1e-13, atol=1e-14)

        problem = make_problem("gaussian")
        gspec = problem.spec(8, 8)
        g = problem.initialize(gspec, GAS)
        for (i, j) in [(3, 3), (0, 7), (5, 2)]:
            np.testing.assert_allclose(
                g.avg[i, j], oracle(gaussian_ic, gspec, i, j), rtol=2e-6)

    def test_uniform_regions_average_exactly(self):
        """Away from the quadrant interfaces the average is the constant."""
        problem = make_problem("laxliu12")
        spec = problem.spec(12, 12)
        f = problem.initialize(spec, GAS)
        s = load_quadrant_states()[12]
        want_sw = conserved_from_primitive(*s[2], GAS)
        np.testing.assert_allclose(f.avg[1, 1], want_sw, rtol=1e-14)

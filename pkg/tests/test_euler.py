import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from activeflux.euler import (
    GasParams,
    InvalidStateError,
    PrimitiveState,
    conserved_from_primitive,
    flux_x,
    flux_y,
    jacobian_x,
    jacobian_y,
    max_wave_speeds,
    pressure,
    primitive_from_conserved,
    sound_speed,
    split_jacobian_x,
    split_jacobian_y,
    swap_uv,
)

GAS = GasParams()

states = st.tuples(
    st.floats(0.05, 10.0),
    st.floats(-5.0, 5.0),
    st.floats(-5.0, 5.0),
    st.floats(0.05, 10.0),
).map(lambda t: PrimitiveState(*t))


def conserved(prim):
    return conserved_from_primitive(prim.rho, prim.u, prim.v, prim.p, GAS)


class TestConversions:
    def test_rest_state(self):
        q = conserved(PrimitiveState(1.0, 0.0, 0.0, 1.0))
        assert np.allclose(q, [1.0, 0.0, 0.0, 1.0 / 0.4])

    def test_known_state(self):
        q = conserved(PrimitiveState(2.0, 1.0, -3.0, 4.0))
        # e = p/(gamma-1) + rho*(u^2+v^2)/2 = 10 + 10
        assert np.allclose(q, [2.0, 2.0, -6.0, 20.0])

    @given(states)
    def test_round_trip(self, prim):
        q = conserved(prim)
        rho, u, v, p = primitive_from_conserved(q, GAS)
        assert np.allclose([rho, u, v, p],
                           [prim.rho, prim.u, prim.v, prim.p],
                           rtol=1e-12, atol=1e-12)

    def test_negative_density_raises(self):
        with pytest.raises(InvalidStateError):
            primitive_from_conserved(np.array([-1.0, 0.0, 0.0, 1.0]), GAS)

    def test_negative_pressure_raises(self):
        # e smaller than kinetic energy
        with pytest.raises(InvalidStateError):
            sound_speed(np.array([1.0, 2.0, 0.0, 1.0]), GAS)


class TestFluxes:
    def test_unit_flow(self):
        q = conserved(PrimitiveState(1.0, 1.0, 0.0, 1.0))
        # e = 1/0.4 + 0.5 = 3, energy flux u*(e + p) = 4
        assert np.allclose(flux_x(q, GAS), [1.0, 2.0, 0.0, 4.0])

    @given(states)
    def test_flux_swap_symmetry(self, prim):
        q = conserved(prim)
        assert np.allclose(flux_y(q, GAS), swap_uv(flux_x(swap_uv(q), GAS)),
                           rtol=1e-12, atol=1e-12)

    @given(states)
    def test_flux_jacobian_consistency(self, prim):
        q = conserved(prim)
        eps = 1e-6
        for jac, flux in ((jacobian_x, flux_x), (jacobian_y, flux_y)):
            J = jac(q, GAS)
            num = np.empty((4, 4))
            for k in range(4):
                dq = np.zeros(4)
                dq[k] = eps * max(1.0, abs(q[k]))
                num[:, k] = (flux(q + dq, GAS) - flux(q - dq, GAS)) / (2 * dq[k])
            scale = max(1.0, np.abs(J).max())
            assert np.abs(J - num).max() / scale < 1e-6


class TestSplitting:
    @given(states)
    @settings(max_examples=60)
    def test_split_sums_to_jacobian(self, prim):
        q = conserved(prim)
        for jac, split in ((jacobian_x, split_jacobian_x),
                           (jacobian_y, split_jacobian_y)):
            s = split(q, GAS)
            assert np.allclose(s.j_plus + s.j_minus, jac(q, GAS),
                               rtol=1e-10, atol=1e-10)

    @given(states)
    @settings(max_examples=60)
    def test_split_eigenvalue_signs(self, prim):
        q = conserved(prim)
        s = split_jacobian_x(q, GAS)
        for mat, sign in ((s.j_plus, 1.0), (s.j_minus, -1.0)):
            lam = np.linalg.eigvals(mat)
            assert np.abs(lam.imag).max() < 1e-8
            assert (sign * lam.real > -1e-8).all()

    def test_supersonic_split_is_one_sided(self):
        prim = PrimitiveState(1.0, 5.0, 0.0, 1.0)  # u >> c
        q = conserved(prim)
        s = split_jacobian_x(q, GAS)
        assert np.allclose(s.j_plus, jacobian_x(q, GAS), atol=1e-10)
        assert np.abs(s.j_minus).max() < 1e-10

    @given(states)
    @settings(max_examples=60)
    def test_split_swap_symmetry(self, prim):
        q = conserved(prim)
        sx = split_jacobian_x(swap_uv(q), GAS)
        sy = split_jacobian_y(q, GAS)
        P = np.eye(4)[[0, 2, 1, 3]]
        assert np.allclose(P @ sx.j_plus @ P, sy.j_plus, atol=1e-10)
        assert np.allclose(P @ sx.j_minus @ P, sy.j_minus, atol=1e-10)


class TestScalars:
    def test_sound_speed(self):
        q = conserved(PrimitiveState(1.0, 0.0, 0.0, 1.0))
        assert sound_speed(q, GAS) == pytest.approx(np.sqrt(1.4), rel=1e-14)
        assert pressure(q, GAS) == pytest.approx(1.0, rel=1e-14)

    def test_wave_speeds(self):
        q = conserved(PrimitiveState(1.0, 0.3, -0.2, 1.0))
        sx, sy = max_wave_speeds(q, GAS)
        c = np.sqrt(1.4)
        assert sx == pytest.approx(0.3 + c, rel=1e-13)
        assert sy == pytest.approx(0.2 + c, rel=1e-13)

    def test_batched_broadcasting(self):
        rng = np.random.default_rng(0)
        prim = np.stack([rng.uniform(0.5, 2.0, 10), rng.normal(0, 1, 10),
                         rng.normal(0, 1, 10), rng.uniform(0.5, 2.0, 10)], axis=-1)
        q = np.stack([conserved(PrimitiveState(*p)) for p in prim])
        assert flux_x(q, GAS).shape == (10, 4)
        assert jacobian_x(q, GAS).shape == (10, 4, 4)
        s = split_jacobian_x(q, GAS)
        assert s.j_plus.shape == (10, 4, 4)
        for k in range(10):
            sk = split_jacobian_x(q[k], GAS)
            assert np.allclose(s.j_plus[k], sk.j_plus)

import numpy as np
import pytest

from wallwalk.coins import SIGMA_X, SIGMA_Y, SIGMA_Z, DomainWallParams
from wallwalk.continuum import (
    SPIN_FRAME_2D,
    convergence_study,
    dirac_evolve_2d,
    to_reference_frame,
)
from wallwalk.lattice import (
    GaussianPacketSpec,
    LatticeGeometry,
    SpinorField,
    make_gaussian_packet,
    probability_density,
    total_norm,
    zero_field,
)
from wallwalk.observables import axis_moments, std_dev_per_axis

MASSLESS = DomainWallParams(mass=0.0, lam=60.0, coupling=70.0, epsilon=0.02)


class TestFrameMap:
    def test_frame_is_unitary(self):
        v = SPIN_FRAME_2D
        assert np.max(np.abs(v.conj().T @ v - np.eye(2))) < 1e-15

    def test_frame_rotates_drift_matrices(self):
        # walk-basis kinetic matrices (sigma_y, sigma_z) map onto the
        # reference form (sigma_z, -sigma_y) with sigma_x untouched
        v = SPIN_FRAME_2D
        assert np.max(np.abs(v @ SIGMA_Y @ v.conj().T - SIGMA_Z)) < 1e-15
        assert np.max(np.abs(v @ SIGMA_Z @ v.conj().T + SIGMA_Y)) < 1e-15
        assert np.max(np.abs(v @ SIGMA_X @ v.conj().T - SIGMA_X)) < 1e-15

    def test_frame_preserves_density(self):
        rng = np.random.default_rng(51)
        g = LatticeGeometry(sizes=(6, 6), epsilon=0.1)
        amps = rng.normal(size=(6, 6, 2)) + 1j * rng.normal(size=(6, 6, 2))
        f = SpinorField(g, amps)
        assert np.allclose(
            probability_density(to_reference_frame(f)), probability_density(f), atol=1e-13
        )


class TestReferenceSolver:
    def test_zero_field_stays_zero(self):
        g = LatticeGeometry(sizes=(16, 16), epsilon=0.02)
        out = dirac_evolve_2d(zero_field(g, 2), MASSLESS, t_final=0.1)
        assert np.all(out.amplitudes == 0)

    def test_up_component_translates_rigidly_along_x(self):
        # exact solution of d_t psi_up = d_x psi_up: profile advects by t
        g = LatticeGeometry(sizes=(64, 4), epsilon=0.05)
        x = g.coordinates(0)
        profile = np.exp(-(x**2) / (2 * 0.3**2)).astype(complex)
        amps = np.zeros((64, 4, 2), dtype=complex)
        amps[:, :, 0] = profile[:, None]
        amps /= np.sqrt(np.sum(np.abs(amps) ** 2))
        t_final = 10 * 0.05  # translate by exactly 10 sites
        out = dirac_evolve_2d(SpinorField(g, amps), MASSLESS, t_final)
        expected = np.roll(amps, -10, axis=0)
        assert np.max(np.abs(out.amplitudes - expected)) < 1e-7
        assert np.all(out.amplitudes[:, :, 1] == 0)

    def test_norm_conserved_to_1e8(self):
        g = LatticeGeometry(sizes=(32, 32), epsilon=0.04)
        params = DomainWallParams(mass=1.0, lam=60.0, coupling=70.0, epsilon=0.04)
        f = make_gaussian_packet(g, GaussianPacketSpec(center=(0, 0), width=0.15, polarization=(1, 1)))
        out = dirac_evolve_2d(f, params, t_final=0.4)
        assert abs(total_norm(out) - 1.0) < 1e-8

    def test_instability_aborts_with_diagnostic(self):
        g = LatticeGeometry(sizes=(64, 4), epsilon=0.02)
        f = make_gaussian_packet(g, GaussianPacketSpec(center=(0, 0), width=0.1, polarization=(1, 1)))
        with pytest.raises(RuntimeError, match="norm drift"):
            dirac_evolve_2d(f, MASSLESS, t_final=2.0, dt=0.05)

    def test_dt_must_divide_t_final(self):
        g = LatticeGeometry(sizes=(16, 16), epsilon=0.02)
        f = make_gaussian_packet(g, GaussianPacketSpec(center=(0, 0), width=0.1, polarization=(1, 1)))
        with pytest.raises(ValueError):
            dirac_evolve_2d(f, MASSLESS, t_final=0.05, dt=0.002 * 1.0000001)

    def test_wall_confines_y_while_x_motion_is_free(self):
        # the up component is the bound one: it hugs the wall and rides
        # along x at speed 1, while a wall-free run disperses in y
        eps = 0.02
        g = LatticeGeometry(sizes=(128, 128), epsilon=eps)
        params = DomainWallParams(mass=2.0, lam=60.0, coupling=140.0, epsilon=eps)
        f = make_gaussian_packet(g, GaussianPacketSpec(center=(0, 0), width=0.1, polarization=(1, 0)))
        walled = probability_density(dirac_evolve_2d(f, params, t_final=0.8))
        free = probability_density(
            dirac_evolve_2d(f, DomainWallParams(0.0, 60.0, 140.0, eps), t_final=0.8)
        )
        assert std_dev_per_axis(walled, g, 1) < 0.15
        assert std_dev_per_axis(free, g, 1) > 4 * std_dev_per_axis(walled, g, 1)
        mean_x, sigma_x = axis_moments(walled, g, 0)
        assert abs(abs(mean_x) - 0.8) < 0.05
        assert sigma_x < 0.15


class TestConvergenceStudy:
    PACKET = GaussianPacketSpec(center=(0.0, 0.0), width=0.1, polarization=(1, 1))
    PARAMS = DomainWallParams(mass=1.0, lam=60.0, coupling=70.0, epsilon=0.08)

    def test_error_vanishes_at_t_zero(self):
        table = convergence_study(self.PACKET, self.PARAMS, [0.04], t_final=0.0, extent=0.64)
        assert table["rows"][0]["error"] < 1e-13

    def test_two_rung_ratio_in_band(self):
        table = convergence_study(
            self.PACKET, self.PARAMS, [0.08, 0.04], t_final=0.16, extent=0.64
        )
        assert table["orders"][0]["error_ratio"] > 1.5

    def test_free_case_converges_too(self):
        free = DomainWallParams(mass=0.0, lam=60.0, coupling=70.0, epsilon=0.08)
        table = convergence_study(self.PACKET, free, [0.08, 0.04], t_final=0.16, extent=0.64)
        assert table["orders"][0]["error_ratio"] > 1.5

    def test_mismatched_domain_rejected(self):
        with pytest.raises(ValueError):
            convergence_study(self.PACKET, self.PARAMS, [0.03], t_final=0.12, extent=0.64)
        with pytest.raises(ValueError):
            convergence_study(self.PACKET, self.PARAMS, [0.04], t_final=0.1399, extent=0.64)

"""Unit tests for pauli_dynamics module"""

import numpy as np
import pytest
from scipy.integrate import quad

from src.errors import BoundaryLeakError, GridTooCoarseError, UnstableStepError
from src.pauli_dynamics import (
    GridSpec,
    Regime,
    density_profile,
    evolve_in_field,
    free_width,
    initial_spinor,
    lobe_densities,
    magnetic_field,
    mixture_density,
    post_field_spinor,
    pure_density,
    su2_exponential,
    validate_field,
)
from src.physical_config import derive_beam_params
from src.two_state_postulate import BlochAngles


@pytest.fixture
def small_grid(config):
    """200 x 200 nodes over 12 sigma0, 16.7 nodes per sigma0"""
    extent = 12 * config.sigma0
    return GridSpec(200, 200, extent, extent)


class TestClosedFormSpinor:
    """Test the initial and post-field spinors"""

    def test_initial_normalization(self, config):
        """Test that the entrance spinor integrates to one"""
        field = initial_spinor(BlochAngles(np.pi / 3, 1.0), config)
        reach = 10 * config.sigma0

        total = quad(lambda z: pure_density(field, z, 0.0), -reach, reach, epsabs=1e-12)[0]

        assert total == pytest.approx(1.0, abs=1e-9)

    def test_initial_components_share_envelope(self, config):
        """Test that |Psi+| / |Psi-| = cot(theta0 / 2) everywhere at t = 0"""
        field = initial_spinor(BlochAngles(np.pi / 3), config)

        plus, minus = field.components(np.array([0.0, 3e-5]), np.array([1e-5, -2e-4]), 0.0)

        assert np.allclose(np.abs(plus) / np.abs(minus), np.sqrt(3))

    def test_initial_only_at_time_zero(self, config):
        """Test that the entrance spinor rejects later times"""
        field = initial_spinor(BlochAngles(1.0), config)

        with pytest.raises(ValueError):
            field.components(0.0, 0.0, 1e-6)

    def test_post_field_needs_params(self, config):
        """Test regime consistency"""
        from src.pauli_dynamics import SpinorField

        with pytest.raises(ValueError):
            SpinorField(Regime.POST_FIELD, config, BlochAngles(1.0))

    def test_post_field_normalization(self, config, params):
        """Test that the post-field density integrates to one at the screen"""
        field = post_field_spinor(BlochAngles(2.0, 3.0), config, params)
        reach = params.screen_offset + 10 * config.sigma0

        total = quad(lambda z: pure_density(field, z, params.t_screen), -reach, reach, points=[0.0], limit=200)[0]

        assert total == pytest.approx(1.0, abs=1e-8)

    def test_post_field_lobe_masses(self, config, params):
        """Test the 3:1 split of theta0 = pi/3"""
        field = post_field_spinor(BlochAngles(np.pi / 3), config, params)
        z = np.linspace(-1e-3, 1e-3, 20001)
        g_plus, g_minus = lobe_densities(field, z, params.t_screen)

        mass_plus = np.trapezoid(field.angles.amplitude_plus**2 * g_plus, z)
        mass_minus = np.trapezoid(field.angles.amplitude_minus**2 * g_minus, z)

        assert mass_plus == pytest.approx(0.75, abs=1e-6)
        assert mass_minus == pytest.approx(0.25, abs=1e-6)

    def test_peaks_at_screen(self, config, params):
        """Test lobe maxima near +-4.2e-4 m with amplitude ratio sqrt(3)"""
        field = post_field_spinor(BlochAngles(np.pi / 3), config, params)
        z = np.linspace(-8e-4, 8e-4, 160001)

        rho = pure_density(field, z, params.t_screen)
        upper = z > 0
        z_up = z[upper][np.argmax(rho[upper])]
        z_down = z[~upper][np.argmax(rho[~upper])]

        assert z_up == pytest.approx(4.2e-4, rel=0.05)
        assert z_down == pytest.approx(-4.2e-4, rel=0.05)
        assert np.sqrt(rho[upper].max() / rho[~upper].max()) == pytest.approx(np.sqrt(3), rel=1e-6)

    def test_density_blind_to_phases(self, config, params):
        """Test that phi0 and the lobe phase constants leave the density unchanged"""
        shifted = config.model_copy(update={"phi_plus": 0.7, "phi_minus": -2.1})
        a = post_field_spinor(BlochAngles(1.1, 0.0), config, params)
        b = post_field_spinor(BlochAngles(1.1, 4.0), shifted, params)
        x, z = np.meshgrid(np.linspace(-3e-4, 3e-4, 7), np.linspace(-6e-4, 6e-4, 13))

        assert np.allclose(a.density(x, z, 2e-4), b.density(x, z, 2e-4), rtol=1e-12, atol=0)

    def test_lobe_speed_is_wavenumber(self, config, params):
        """Test k = m u / hbar"""
        field = post_field_spinor(BlochAngles(1.0), config, params)

        assert field.wavenumber == pytest.approx(config.mass * params.u / config.hbar)
        assert initial_spinor(BlochAngles(1.0), config).wavenumber == 0.0


class TestMixtureDensity:
    """Test mixture_density"""

    def test_symmetric(self, config, params):
        """Test rho(z) = rho(-z) to machine precision"""
        z = np.linspace(0, 8e-4, 101)

        for t in (0.0, 1e-4, params.t_screen):
            assert np.array_equal(mixture_density(config, params, z, t), mixture_density(config, params, -z, t))

    def test_value_on_axis_at_exit(self, config, params):
        """Test rho(0, 0) = N exp(-z_delta^2 / 2 sigma0^2)"""
        norm = 1 / np.sqrt(2 * np.pi * config.sigma0**2)
        expected = norm * np.exp(-params.z_delta**2 / (2 * config.sigma0**2))

        assert mixture_density(config, params, 0.0, 0.0) == pytest.approx(expected, rel=1e-12)

    def test_equals_pure_state_at_half_angle(self, config, params):
        """Test that the mixture density matches theta0 = pi/2"""
        field = post_field_spinor(BlochAngles(np.pi / 2), config, params)
        z = np.linspace(-6e-4, 6e-4, 41)

        assert np.allclose(mixture_density(config, params, z, 3e-4), pure_density(field, z, 3e-4))


class TestDensityProfile:
    """Test density_profile"""

    def test_long_table(self, config, params):
        """Test the t, z, rho export"""
        field = post_field_spinor(BlochAngles(1.0), config, params)

        frame = density_profile(field, [0.0, params.t_screen], np.linspace(-1e-3, 1e-3, 11))

        assert list(frame.columns) == ["t", "z", "rho"]
        assert len(frame) == 22


class TestFieldHelpers:
    """Test magnetic_field and su2_exponential"""

    def test_magnetic_field(self, config):
        """Test (B'0 x, 0, B0 - B'0 z)"""
        bx, by, bz = magnetic_field(config, 1e-3, 2e-3)

        assert bx == pytest.approx(1.0)
        assert by == 0.0
        assert bz == pytest.approx(3.0)

    def test_su2_is_unitary(self):
        """Test U U^dagger = 1 for a generic field"""
        u11, u12, u21, u22 = su2_exponential(0.3, -1.2, 2.0, 0.7)
        matrix = np.array([[u11, u12], [u21, u22]], dtype=complex)

        assert np.allclose(matrix @ matrix.conj().T, np.eye(2))

    def test_su2_zero_field_is_identity(self):
        """Test the b = 0 limit"""
        u11, u12, u21, u22 = su2_exponential(0.0, 0.0, 0.0, 5.0)

        assert (u11, u12, u21, u22) == (1.0, 0.0, 0.0, 1.0)

    def test_su2_diagonal_phase(self):
        """Test exp(-i tau bz sigma_z)"""
        u11, u12, u21, u22 = su2_exponential(0.0, 0.0, 2.0, 0.25)

        assert u11 == pytest.approx(np.exp(-0.5j))
        assert u22 == pytest.approx(np.exp(0.5j))
        assert u12 == 0


class TestGridSpec:
    """Test GridSpec"""

    def test_for_config(self, config):
        """Test the default box"""
        grid = GridSpec.for_config(config)

        assert grid.nodes_x == 256
        assert grid.extent_z == pytest.approx(12 * config.sigma0)

    def test_axes_centred(self, small_grid):
        """Test that the axis includes zero"""
        x, z = small_grid.axes()

        assert 0.0 in x
        assert z[0] == pytest.approx(-small_grid.extent_z / 2)

    def test_too_coarse(self, config):
        """Test the 16 nodes per sigma0 floor"""
        grid = GridSpec(32, 32, 12 * config.sigma0, 12 * config.sigma0)

        with pytest.raises(GridTooCoarseError):
            grid.check_resolution(config.sigma0)


class TestEvolveInField:
    """Test the split-operator grid oracle"""

    def test_reproduces_offset_and_speed(self, config, params, small_grid):
        """Test z_delta and u within 5 % and norm conservation"""
        # Arrange
        initial = initial_spinor(BlochAngles(np.pi / 2), config)

        # Act
        state = evolve_in_field(initial, small_grid, 200, params)
        validation = validate_field(state, params)

        # Assert
        assert validation.passed
        assert validation.z_delta_error < 0.05
        assert validation.u_error < 0.05
        assert validation.norm_drift < 1e-6
        assert state.time == pytest.approx(params.dt_field)

    def test_validation_report(self, config, params, small_grid):
        """Test the as_dict verdict"""
        state = evolve_in_field(initial_spinor(BlochAngles(np.pi / 2), config), small_grid, 100, params)

        report = validate_field(state, params).as_dict()

        assert report["verdict"] == "PASS"
        assert report["expected_u"] == params.u

    def test_spin_up_stays_up(self, config, params, small_grid):
        """Test theta0 = 0 keeps the minus component empty"""
        state = evolve_in_field(initial_spinor(BlochAngles(0.0), config), small_grid, 100, params)

        norm_plus, norm_minus = state.component_norms()

        assert norm_minus < 1e-8
        assert norm_plus == pytest.approx(1.0, abs=1e-6)

    def test_zero_gradient_spreads_freely(self, config, small_grid):
        """Test B'0 = 0: no offset and the free-packet width"""
        flat = config.model_copy(update={"b0_grad": 0.0})
        flat_params = derive_beam_params(flat)

        state = evolve_in_field(initial_spinor(BlochAngles(np.pi / 2), flat), small_grid, 50, flat_params)

        assert abs(state.centroid("plus")) < 1e-9
        assert abs(state.velocity("plus")) < 1e-6
        assert state.width("plus") == pytest.approx(free_width(flat, flat_params.dt_field), rel=1e-3)

    def test_lab_frame_matches_interaction_picture(self, config, params, small_grid):
        """Test that applying B0 on the grid gives the analytically restored precession"""
        initial = initial_spinor(BlochAngles(1.0, 0.5), config)

        rotating = evolve_in_field(initial, small_grid, 100, params, interaction_picture=True)
        lab = evolve_in_field(initial, small_grid, 100, params, interaction_picture=False)
        plus_a, minus_a = rotating.lab_components()
        plus_b, minus_b = lab.lab_components()

        scale = np.abs(plus_a).max()
        assert np.allclose(plus_a, plus_b, rtol=0, atol=1e-6 * scale)
        assert np.allclose(minus_a, minus_b, rtol=0, atol=1e-6 * scale)

    def test_snapshots(self, config, params, small_grid):
        """Test snapshot capture and export"""
        initial = initial_spinor(BlochAngles(np.pi / 2), config)

        state = evolve_in_field(initial, small_grid, 100, params, snapshot_times=[0.0, params.dt_field / 2])

        assert [t for t, _, _ in state.snapshots] == [0.0, params.dt_field / 2]
        frame = state.snapshot_frame(*state.snapshots[0][1:])
        assert list(frame.columns) == ["x", "z", "re_plus", "im_plus", "re_minus", "im_minus"]
        assert len(frame) == 200 * 200

    def test_single_step_unstable(self, config, params, small_grid):
        """Test that one step across the magnet is rejected"""
        with pytest.raises(UnstableStepError):
            evolve_in_field(initial_spinor(BlochAngles(1.0), config), small_grid, 1, params)

    def test_coarse_grid_rejected(self, config, params):
        """Test a 32 x 32 grid"""
        grid = GridSpec(32, 32, 12 * config.sigma0, 12 * config.sigma0)

        with pytest.raises(GridTooCoarseError):
            evolve_in_field(initial_spinor(BlochAngles(1.0), config), grid, 100, params)

    def test_small_box_leaks(self, config, params):
        """Test a box too narrow for the packet"""
        grid = GridSpec(128, 128, 6 * config.sigma0, 6 * config.sigma0)

        with pytest.raises(BoundaryLeakError):
            evolve_in_field(initial_spinor(BlochAngles(1.0), config), grid, 100, params)

    def test_requires_entrance_spinor(self, config, params, small_grid):
        """Test that a post-field spinor is rejected"""
        with pytest.raises(ValueError):
            evolve_in_field(post_field_spinor(BlochAngles(1.0), config, params), small_grid, 100, params)


class TestFreeWidth:
    """Test free_width"""

    def test_initial_width(self, config):
        """Test sigma(0) = sigma0"""
        assert free_width(config, 0.0) == config.sigma0

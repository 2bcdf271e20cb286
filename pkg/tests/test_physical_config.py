"""Unit tests for physical_config module"""

import json

import pytest

from src.errors import ConfigError
from src.physical_config import (
    HBAR,
    MU_BOHR,
    PhysicalConfig,
    config_from_mapping,
    derive_beam_params,
    load_config,
)


class TestPhysicalConfigDefaults:
    """Test the default silver-atom constants"""

    def test_defaults(self, config):
        """Test default field values"""
        assert config.mass == 1.8e-25
        assert config.hbar == HBAR
        assert config.mu_bohr == MU_BOHR
        assert config.b0 == 5.0
        assert config.b0_grad == 1e3
        assert config.sigma0 == 1e-4
        assert config.magnet_length == 1e-2
        assert config.free_path == 0.2
        assert config.v_beam == 500.0
        assert config.phi_plus == 0.0
        assert config.phi_minus == 0.0

    def test_config_is_frozen(self, config):
        """Test that the model cannot be mutated"""
        with pytest.raises(Exception):
            config.b0 = 1.0

    def test_unknown_field_rejected(self):
        """Test that unknown keys are reported by name"""
        with pytest.raises(ConfigError, match="magnet_colour"):
            config_from_mapping({"magnet_colour": "red"})


class TestDeriveBeamParams:
    """Test derive_beam_params"""

    def test_default_values(self, params):
        """Test crossing time, speed and offset for the default magnet"""
        assert params.dt_field == pytest.approx(2e-5, rel=1e-15)
        assert params.u == pytest.approx(1.0, rel=0.05)
        assert params.z_delta == pytest.approx(1e-5, rel=0.05)
        assert params.t_screen == pytest.approx(4e-4)

    def test_offset_is_half_speed_times_crossing_time(self, params):
        """Test z_delta = u * dt / 2"""
        assert params.z_delta == pytest.approx(params.u * params.dt_field / 2, abs=1e-14)

    def test_scales_linearly_with_gradient(self, config, params):
        """Test doubling B'0 doubles u and z_delta"""
        doubled = derive_beam_params(config.model_copy(update={"b0_grad": 2e3}))

        assert doubled.u == pytest.approx(2 * params.u)
        assert doubled.z_delta == pytest.approx(2 * params.z_delta)

    def test_zero_gradient(self, config):
        """Test a field without gradient leaves the packets unseparated"""
        params = derive_beam_params(config.model_copy(update={"b0_grad": 0.0}))

        assert params.u == 0.0
        assert params.z_delta == 0.0
        assert params.screen_offset == 0.0

    def test_screen_offset(self, params):
        """Test lobe centre at the screen"""
        assert params.screen_offset == pytest.approx(params.z_delta + params.u * params.t_screen)
        assert params.screen_offset == pytest.approx(4.2e-4, rel=0.05)
        assert params.lobe_center(0.0) == params.z_delta

    def test_negative_gradient_rejected(self, config):
        """Test that a gradient forced below zero is rejected"""
        broken = config.model_construct(**{**config.model_dump(), "b0_grad": -1.0})

        with pytest.raises(ConfigError, match="b0_grad"):
            derive_beam_params(broken)

    def test_zero_speed_rejected(self, config):
        """Test that a non-positive beam speed is rejected"""
        broken = config.model_construct(**{**config.model_dump(), "v_beam": 0.0})

        with pytest.raises(ConfigError, match="v_beam"):
            derive_beam_params(broken)


class TestLoadConfig:
    """Test load_config"""

    def test_none_gives_defaults(self):
        """Test loading without a path"""
        assert load_config(None) == PhysicalConfig()

    def test_empty_object_gives_defaults(self, temp_json_file):
        """Test loading an empty JSON object"""
        # Arrange
        path = temp_json_file({})

        # Act
        config = load_config(path)

        # Assert
        assert config == PhysicalConfig()

    def test_override(self, temp_json_file):
        """Test loading a partial override"""
        path = temp_json_file({"b0_grad": 2000})

        config = load_config(path)

        assert config.b0_grad == 2000.0
        assert config.sigma0 == 1e-4

    def test_negative_sigma_names_field(self, temp_json_file):
        """Test that a negative width is rejected with the field name"""
        path = temp_json_file({"sigma0": -1})

        with pytest.raises(ConfigError) as exc_info:
            load_config(path)

        assert exc_info.value.field == "sigma0"
        assert "sigma0" in str(exc_info.value)

    def test_non_finite_phase_rejected(self, tmp_path):
        """Test that NaN phases are rejected"""
        path = tmp_path / "nan.json"
        path.write_text('{"phi_plus": NaN}', encoding="utf-8")

        with pytest.raises(ConfigError, match="phi_plus"):
            load_config(path)

    def test_invalid_json(self, tmp_path):
        """Test a malformed file"""
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")

        with pytest.raises(ConfigError, match="invalid JSON"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        """Test a path that does not exist"""
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "absent.json")

    def test_non_object(self, tmp_path):
        """Test a JSON array instead of an object"""
        path = tmp_path / "list.json"
        path.write_text(json.dumps([1, 2]), encoding="utf-8")

        with pytest.raises(ConfigError, match="JSON object"):
            load_config(path)

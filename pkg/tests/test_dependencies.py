"""Unit tests for dependencies module"""

import pytest
from unittest.mock import patch

from src.errors import ConfigError
from src.physical_config import PhysicalConfig


class TestInitDependencies:
    """Test init_dependencies function"""

    def test_init_dependencies_defaults(self):
        """Test initialization without a config file"""
        from src.dependencies import init_dependencies
        import src.dependencies as deps_module

        with patch('src.dependencies.PHYSICAL_CONFIG_PATH', None):
            config, params = init_dependencies()

        assert config == PhysicalConfig()
        assert deps_module.physical_config is config
        assert deps_module.beam_params is params

    def test_init_dependencies_from_file(self, temp_json_file):
        """Test initialization from an explicit config file"""
        from src.dependencies import init_dependencies

        config, params = init_dependencies(temp_json_file({"b0_grad": 2000}))

        assert config.b0_grad == 2000.0
        assert params.u == pytest.approx(2 * 1.0304, rel=1e-3)

    def test_init_dependencies_bad_file(self, temp_json_file):
        """Test that an invalid config propagates"""
        from src.dependencies import init_dependencies

        with pytest.raises(ConfigError, match="sigma0"):
            init_dependencies(temp_json_file({"sigma0": -1}))


class TestGetters:
    """Test getter functions"""

    def test_get_physical_config_not_initialized(self):
        """Test getter before initialization"""
        from src.dependencies import get_physical_config

        with pytest.raises(RuntimeError, match="not initialized"):
            get_physical_config()

    def test_get_beam_params_not_initialized(self):
        """Test getter before initialization"""
        from src.dependencies import get_beam_params

        with pytest.raises(RuntimeError, match="not initialized"):
            get_beam_params()

    def test_getters_after_initialization(self, initialized_dependencies):
        """Test getters return the loaded instances"""
        from src.dependencies import get_beam_params, get_physical_config

        config, params = initialized_dependencies

        assert get_physical_config() is config
        assert get_beam_params() is params

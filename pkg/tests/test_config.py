"""Unit tests for config module"""

import importlib

import pytest

import src.config as settings


@pytest.fixture
def reload_settings(monkeypatch):
    """Reload src.config under the patched environment; restore it afterwards"""
    yield lambda: importlib.reload(settings)
    monkeypatch.undo()
    importlib.reload(settings)


class TestSettings:
    """Test environment-driven settings"""

    def test_integration_overrides(self, mock_env_vars, reload_settings):
        """Test that RK4 and crossing settings come from the environment"""
        # Arrange
        mock_env_vars(RK4_STEPS=1500, TRAJECTORY_SAMPLE_EVERY=5, CROSSING_SCAN_LIMIT=250)

        # Act
        reloaded = reload_settings()

        # Assert
        assert reloaded.RK4_STEPS == 1500
        assert reloaded.TRAJECTORY_SAMPLE_EVERY == 5
        assert reloaded.CROSSING_SCAN_LIMIT == 250

    def test_cors_origins_split_and_trimmed(self, mock_env_vars, reload_settings):
        """Test comma-separated origins with blanks"""
        mock_env_vars(CORS_ORIGINS=" http://a.test , ,http://b.test")

        reloaded = reload_settings()

        assert reloaded.CORS_ORIGINS == ["http://a.test", "http://b.test"]

    def test_empty_config_path_means_defaults(self, mock_env_vars, reload_settings):
        """Test that an empty PHYSICAL_CONFIG_PATH is treated as unset"""
        mock_env_vars(PHYSICAL_CONFIG_PATH="")

        reloaded = reload_settings()

        assert reloaded.PHYSICAL_CONFIG_PATH is None

    def test_loads_dotenv(self, reload_settings, mocker):
        """Test that a .env file is consulted on import"""
        load = mocker.patch("dotenv.load_dotenv")

        reload_settings()

        load.assert_called_once_with()

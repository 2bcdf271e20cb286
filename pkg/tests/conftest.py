"""Shared test fixtures for all test modules"""

import pytest
import numpy as np
import json

from src.physical_config import PhysicalConfig, derive_beam_params


@pytest.fixture
def config():
    """Default silver-atom configuration"""
    return PhysicalConfig()


@pytest.fixture
def params(config):
    """Derived beam parameters of the default configuration"""
    return derive_beam_params(config)


@pytest.fixture
def rng():
    """Seeded random stream"""
    return np.random.default_rng(12345)


@pytest.fixture
def temp_json_file(tmp_path):
    """Create a temporary JSON file for testing"""
    def _create_json_file(data, filename="test.json"):
        """Helper to create JSON files in temp directory"""
        file_path = tmp_path / filename
        with open(file_path, 'w', encoding='utf-8') as f:
            json.dump(data, f)
        return str(file_path)

    return _create_json_file


@pytest.fixture(autouse=True)
def reset_dependency_globals():
    """Reset dependencies.py global variables before each test"""
    import src.dependencies as deps
    deps.physical_config = None
    deps.beam_params = None
    yield
    deps.physical_config = None
    deps.beam_params = None


@pytest.fixture
def initialized_dependencies(config, params):
    """Populate the dependency holder with the default configuration"""
    import src.dependencies as deps
    deps.physical_config = config
    deps.beam_params = params
    return config, params


@pytest.fixture
def mock_env_vars(monkeypatch):
    """Mock environment variables"""
    def _set_env(**kwargs):
        """Set multiple environment variables"""
        for key, value in kwargs.items():
            monkeypatch.setenv(key, str(value))

    return _set_env

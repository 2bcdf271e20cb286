"""Unit tests for the experiment handlers"""

import pytest
from unittest.mock import patch
from fastapi.testclient import TestClient
from src.main import app


@pytest.fixture
def client():
    """Create test client"""
    return TestClient(app)


class TestCoinEndpoint:
    """Test coin protocol endpoint"""

    def test_coin_preset(self, client):
        """Test the same-axis preset"""
        # Act
        response = client.post("/coin", json={"preset": "fig3", "trials": 200, "seed": 1})

        # Assert
        assert response.status_code == 200
        data = response.json()
        assert data['trials'] == 200
        assert data['steps'][0]['angle_to_prev_deg'] is None
        assert data['steps'][1]['p_agree_prev'] == 1.0
        assert sum(data['joint_counts'].values()) == 200

    def test_coin_axes(self, client):
        """Test explicit axes"""
        response = client.post("/coin", json={"axes": ["z", [0.0, 1.0, 0.0]], "trials": 100})

        assert response.status_code == 200
        assert response.json()['steps'][1]['angle_to_prev_deg'] == pytest.approx(90.0)

    def test_coin_unknown_preset(self, client):
        """Test an unknown preset"""
        response = client.post("/coin", json={"preset": "fig99"})

        assert response.status_code == 400

    def test_coin_bad_axis(self, client):
        """Test a non-unit axis"""
        response = client.post("/coin", json={"axes": [[1.0, 1.0, 0.0]], "trials": 10})

        assert response.status_code == 400
        assert "unit norm" in response.json()['detail']

    def test_coin_needs_one_protocol(self, client):
        """Test that preset and axes are exclusive"""
        response = client.post("/coin", json={"preset": "fig2", "axes": ["z"]})

        assert response.status_code == 422

    def test_coin_exception(self, client):
        """Test unexpected failure"""
        with patch('src.handlers.coin.run_protocol', side_effect=Exception('boom')):
            response = client.post("/coin", json={"preset": "fig2", "trials": 10})

        assert response.status_code == 500
        assert "Coin protocol failed" in response.json()['detail']


class TestCurvesEndpoint:
    """Test agreement curves endpoint"""

    def test_curves(self, client):
        """Test reference points of both curves"""
        response = client.get("/curves", params={"angle_count": 5})

        assert response.status_code == 200
        points = response.json()['points']
        assert [p['beta_deg'] for p in points] == pytest.approx([0.0, 45.0, 90.0, 135.0, 180.0])
        assert points[1]['p_same_classical'] == 1.0
        assert points[1]['p_same_quantum'] == pytest.approx(0.8536, abs=1e-4)
        assert points[2]['p_same_classical'] == 0.5

    def test_curves_too_few_angles(self, client):
        """Test the lower bound on angle_count"""
        response = client.get("/curves", params={"angle_count": 1})

        assert response.status_code == 422


class TestBornEndpoint:
    """Test Born prediction endpoint"""

    def test_born(self, client):
        """Test theta0 = 60 degrees"""
        response = client.post("/born", json={"theta0_deg": 60.0})

        assert response.status_code == 200
        data = response.json()
        assert data['p_up'] == pytest.approx(0.75)
        assert data['p_down'] == pytest.approx(0.25)
        assert data['mixture_p_up'] == pytest.approx(0.5)
        assert data['mixture_estimate'] is None

    def test_born_with_mixture_estimate(self, client):
        """Test the Monte Carlo mixture estimate"""
        response = client.post("/born", json={"theta0_deg": 0.0, "mixture_samples": 100_000, "seed": 3})

        assert response.status_code == 200
        assert response.json()['mixture_estimate'] == pytest.approx(0.5, abs=0.01)

    def test_born_out_of_range(self, client):
        """Test theta0 beyond 180 degrees"""
        response = client.post("/born", json={"theta0_deg": 200.0})

        assert response.status_code == 422


class TestSternGerlachEndpoint:
    """Test trajectory ensemble endpoint"""

    def test_pure_state(self, client, initialized_dependencies):
        """Test a small symmetric ensemble"""
        # Act
        response = client.post("/stern-gerlach", json={"theta0_deg": 90.0, "n": 20, "seed": 3})

        # Assert
        assert response.status_code == 200
        data = response.json()
        assert data['spots']['n'] == 20
        assert data['spots']['expected'] == pytest.approx(0.5)
        assert data['crossing']['crossings'] == 0
        assert len(data['final_z']) == 20

    def test_mixture(self, client, initialized_dependencies):
        """Test a small mixture ensemble"""
        response = client.post("/stern-gerlach", json={"mixture": True, "n": 6, "seed": 1})

        assert response.status_code == 200
        assert response.json()['source'] == {"kind": "mixture"}
        assert response.json()['spots']['expected'] is None

    def test_not_initialized(self, client):
        """Test ensemble before startup"""
        response = client.post("/stern-gerlach", json={"n": 6})

        assert response.status_code == 503

    def test_ensemble_cap(self, client, initialized_dependencies):
        """Test the ensemble size limit"""
        response = client.post("/stern-gerlach", json={"n": 10_000_000})

        assert response.status_code == 422

    def test_infinite_z_score_serialized_as_null(self, client, initialized_dependencies):
        """Test a rare opposite spot at expected = 1 does not break the JSON response"""
        # Arrange
        from src.experiment_stats import SpotSummary

        summary = SpotSummary(
            n=20, n_up=19, n_down=1, fraction_up=0.95, fraction_down=0.05,
            binomial_stderr=0.0, expected=1.0, z_score=float("-inf"), degenerate=True,
        )

        # Act
        with patch("src.handlers.stern_gerlach.spot_statistics", return_value=summary):
            response = client.post("/stern-gerlach", json={"theta0_deg": 0.0, "n": 20, "seed": 3})

        # Assert
        assert response.status_code == 200
        spots = response.json()["spots"]
        assert spots["z_score"] is None
        assert spots["verdict"] == "FAIL"
        assert spots["degenerate_stderr"] is True

    def test_unseparated_packets(self, client, initialized_dependencies):
        """Test a weak gradient reports a client error"""
        import src.dependencies as deps_module
        from src.physical_config import derive_beam_params

        weak = deps_module.physical_config.model_copy(update={"b0_grad": 10.0})
        deps_module.physical_config = weak
        deps_module.beam_params = derive_beam_params(weak)

        response = client.post("/stern-gerlach", json={"n": 6})

        assert response.status_code == 400
        assert "sigma0" in response.json()['detail']

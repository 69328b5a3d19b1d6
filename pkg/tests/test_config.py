"""Tests for configuration module."""

import pytest
from pydantic import ValidationError

from app.config import EigenBackend, Environment, Settings
from app.errors import (
    CheckViolation,
    ConfigurationError,
    GeometryError,
    MeshError,
    NumericalError,
    exit_code_for,
)


def test_default_settings():
    """Test that default settings are loaded correctly."""
    settings = Settings()

    assert settings.environment == Environment.DEVELOPMENT
    assert settings.log_level == "INFO"
    assert settings.eig_backend == EigenBackend.AUTO
    assert settings.cluster_tolerance == 1e-6
    assert settings.quadrature_order == 4
    assert settings.layer_quadrature_order == 8
    assert settings.grading_ratio == 1.25
    assert settings.junction_refinement == 8.0
    assert settings.residual_tolerance == 1e-6


def test_environment_override(monkeypatch):
    """Test that LAB_-prefixed variables override defaults."""
    monkeypatch.setenv("LAB_SWEEP_JOBS", "4")
    monkeypatch.setenv("LAB_EIG_BACKEND", "dense")

    settings = Settings()

    assert settings.sweep_jobs == 4
    assert settings.eig_backend == EigenBackend.DENSE


def test_tolerance_range():
    """Test that solver tolerances outside [1e-12, 1e-6] are rejected."""
    with pytest.raises(ValidationError):
        Settings(eig_tolerance=1e-3)


def test_validate_quadrature_config():
    """Test quadrature order validation."""
    settings = Settings(quadrature_order=3)

    with pytest.raises(ConfigurationError, match="quadrature_order must be one of"):
        settings.validate_quadrature_config()


def test_valid_quadrature_config():
    """Test valid quadrature configuration."""
    settings = Settings(quadrature_order=2, layer_quadrature_order=8)

    # Should not raise
    settings.validate_quadrature_config()


@pytest.mark.parametrize(
    ("error", "code"),
    [
        (ConfigurationError("bad"), 2),
        (GeometryError("overlap"), 2),
        (MeshError("floor"), 3),
        (NumericalError("lanczos", estimate=2.0), 3),
        (CheckViolation("sign"), 4),
        (RuntimeError("other"), 1),
    ],
)
def test_exit_codes(error, code):
    """Test the CLI exit code for each error family."""
    assert exit_code_for(error) == code

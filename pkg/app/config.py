"""Configuration management using pydantic-settings."""

from enum import Enum
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.errors import ConfigurationError


class Environment(str, Enum):
    """Application environments."""

    DEVELOPMENT = "development"
    CI = "ci"
    PRODUCTION = "production"


class EigenBackend(str, Enum):
    """Eigensolver backends."""

    AUTO = "auto"
    SPARSE = "sparse"
    DENSE = "dense"


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="LAB_",
        case_sensitive=False,
    )

    # Application Configuration
    log_level: str = Field(
        default="INFO",
        description="Logging level",
    )
    environment: Environment = Field(
        default=Environment.DEVELOPMENT,
        description="Application environment",
    )
    output_dir: Path = Field(
        default=Path("./results"),
        description="Default directory for CSV/JSON/SVG artifacts",
    )
    sweep_jobs: int = Field(
        default=1,
        ge=1,
        description="Number of sweep points evaluated concurrently",
    )
    show_progress: bool = Field(
        default=True,
        description="Render tqdm progress bars during sweeps",
    )

    # Eigensolver Configuration
    eig_backend: EigenBackend = Field(
        default=EigenBackend.AUTO,
        description="Eigensolver backend (auto switches to dense for tiny problems)",
    )
    eig_tolerance: float = Field(
        default=1e-10,
        ge=1e-12,
        le=1e-6,
        description="Relative tolerance passed to the Lanczos solver",
    )
    dense_threshold: int = Field(
        default=400,
        ge=0,
        description="Free-DOF count at or below which the dense solver is used",
    )
    residual_tolerance: float = Field(
        default=1e-6,
        gt=0,
        description="Largest residual accepted per eigenpair, relative to max(1, |lambda|)",
    )
    cluster_tolerance: float = Field(
        default=1e-6,
        gt=0,
        description="Relative gap below which eigenvalues form one multiplicity cluster",
    )
    match_tolerance: float = Field(
        default=5e-2,
        gt=0,
        description="Looser relative gap used to pair discretely split clusters",
    )

    # Quadrature and Mesh Configuration
    quadrature_order: int = Field(
        default=4,
        description="Gauss-Legendre points per boundary edge for boundary integrals",
    )
    layer_quadrature_order: int = Field(
        default=8,
        description="Gauss-Legendre points per edge where ln f varies quickly",
    )
    size_floor: float = Field(
        default=1e-6,
        gt=0,
        description="Smallest admissible boundary edge, relative to the boundary length",
    )
    grading_ratio: float = Field(
        default=1.25,
        gt=1,
        description="Geometric growth ratio of boundary edges away from arc endpoints",
    )
    junction_refinement: float = Field(
        default=8.0,
        ge=1,
        description="Endpoint edges are this many times smaller than the in-arc edge size",
    )

    def validate_quadrature_config(self) -> None:
        """Validate that quadrature orders are supported Gauss-Legendre rules."""
        for name in ("quadrature_order", "layer_quadrature_order"):
            if getattr(self, name) not in (2, 4, 8):
                raise ConfigurationError(f"{name} must be one of 2, 4, 8")


# Global settings instance - lazy loaded
_settings: Settings | None = None


def get_settings() -> Settings:
    """Get the global settings instance."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings

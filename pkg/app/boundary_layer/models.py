"""Data models for boundary-layer cell functions."""

import math
from dataclasses import dataclass

import numpy as np

from app.errors import ConfigurationError


@dataclass(frozen=True)
class ArcShape:
    """Rescaled Dirichlet segment (-2 alpha, 2 beta) on the axis of the half-plane."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0 or self.alpha + self.beta <= 0:
            raise ConfigurationError(
                f"Arc shape needs alpha, beta >= 0 with alpha + beta > 0, "
                f"got ({self.alpha}, {self.beta})"
            )

    @property
    def width(self) -> float:
        return self.alpha + self.beta

    @property
    def endpoints(self) -> tuple[float, float]:
        return -2.0 * self.alpha, 2.0 * self.beta

    def y(self, s1: np.ndarray, s2: np.ndarray) -> np.ndarray:
        """Complex variable y = (s1 + i s2 + alpha - beta) / (alpha + beta)."""
        return (np.asarray(s1, dtype=float) + 1j * np.asarray(s2, dtype=float)
                + self.alpha - self.beta) / self.width


@dataclass(frozen=True)
class CellIntegrals:
    """Quadrature values of the X_eta identities next to their closed forms."""

    eta: float
    flux: float
    trace: float
    grad_norm: float

    @property
    def flux_exact(self) -> float:
        return math.pi - 2.0 * self.eta

    @property
    def trace_exact(self) -> float:
        return -2.0 * self.eta * math.log(math.sin(self.eta))

    @property
    def grad_norm_exact(self) -> float:
        return math.sqrt(math.pi * abs(math.log(math.sin(self.eta))))

    @property
    def max_deviation(self) -> float:
        """Largest absolute gap between a computed value and its closed form."""
        return max(
            abs(self.flux - self.flux_exact),
            abs(self.trace - self.trace_exact),
            abs(self.grad_norm**2 - self.grad_norm_exact**2),
        )

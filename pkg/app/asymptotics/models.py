"""Prediction and bound-check models."""

from dataclasses import dataclass
from enum import Enum

from pydantic import BaseModel

from app.errors import CheckViolation


class PredictionKind(str, Enum):
    """Which correction formula produced a prediction."""

    TWO_TERM = "two_term"
    FIRST_ORDER = "first_order"
    DIRICHLET_CORRECTION = "dirichlet_correction"
    MU_SLOPE = "mu_slope"


class Prediction(BaseModel):
    """A predicted eigenvalue base + correction, with the inputs it was built from."""

    kind: PredictionKind
    mode: int
    base: float
    coefficient: float
    correction: float
    epsilon: float | None = None
    eta: float | None = None
    mu: float | None = None
    robin_A: float | None = None

    @property
    def value(self) -> float:
        return self.base + self.correction


class BoundFamily(str, Enum):
    """Limit regime whose two-sided eigenvalue bounds are checked."""

    DIRICHLET_LIMIT = "dirichlet_limit"
    NEUMANN_LIMIT = "neumann_limit"
    ROBIN_LIMIT = "robin_limit"


@dataclass(frozen=True)
class BoundSample:
    """One sweep point reduced to what the bound check needs.

    `difference` is lambda_eps - lambda_0 for one mode.
    """

    family: BoundFamily
    mode: int
    epsilon: float
    eta: float
    mu: float
    difference: float
    sigma: float = 0.0
    eta0: float = 1.0


class EnvelopeFit(BaseModel):
    """Non-negative constants C_i with target <= sum C_i term_i over the batch."""

    terms: list[str]
    constants: list[float]
    residual: float
    stability: float


class BoundReport(BaseModel):
    """Outcome of a two-sided bound check for one mode over a sweep."""

    family: BoundFamily
    mode: int
    n_samples: int
    tolerance: float
    sign_violation: float | None = None
    upper: EnvelopeFit | None = None
    lower: EnvelopeFit | None = None

    @property
    def passed(self) -> bool:
        return self.sign_violation is None or self.sign_violation <= self.tolerance

    def stable(self, limit: float = 2.0) -> bool:
        """True when every fitted envelope has a stability ratio below `limit`."""
        fits = [fit for fit in (self.upper, self.lower) if fit is not None]
        return all(fit.stability < limit for fit in fits)

    def raise_for_violation(self) -> None:
        """Raise CheckViolation if the sign law of the family is broken."""
        if not self.passed:
            raise CheckViolation(
                f"{self.family.value} sign law violated for mode {self.mode} "
                f"by {self.sign_violation:.3e} (tolerance {self.tolerance:.1e})",
                details=self.model_dump(mode="json"),
            )

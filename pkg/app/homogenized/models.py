"""Data models for the limiting eigenvalue problems and their disk oracles."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from app.errors import ConfigurationError
from app.geometry.models import ArcMap, ThetaMap
from app.mesh.models import BoundaryTag


class LimitKind(str, Enum):
    """Boundary conditions of the limiting problems."""

    DIRICHLET = "dirichlet"
    ROBIN = "robin"
    NEUMANN = "neumann"
    SHIFTED_ROBIN = "shifted_robin"


@dataclass(frozen=True)
class LimitProblem:
    """One limiting problem.

    ROBIN carries the weight A theta'_0, NEUMANN is ROBIN with A = 0, and
    SHIFTED_ROBIN carries (A + mu) theta'_eps with the perturbed map.
    """

    kind: LimitKind
    robin_A: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if self.kind == LimitKind.ROBIN and self.robin_A < 0:
            raise ConfigurationError(
                f"Robin coefficient A must be non-negative, got {self.robin_A}"
            )

    @classmethod
    def dirichlet(cls) -> "LimitProblem":
        return cls(LimitKind.DIRICHLET)

    @classmethod
    def neumann(cls) -> "LimitProblem":
        return cls(LimitKind.NEUMANN)

    @classmethod
    def robin(cls, robin_A: float) -> "LimitProblem":
        return cls(LimitKind.ROBIN, robin_A=robin_A)

    @classmethod
    def shifted_robin(cls, robin_A: float, mu: float) -> "LimitProblem":
        return cls(LimitKind.SHIFTED_ROBIN, robin_A=robin_A, mu=mu)

    @property
    def coupling(self) -> float:
        """Coefficient multiplying theta' in the Robin weight."""
        if self.kind == LimitKind.DIRICHLET:
            return float("inf")
        if self.kind == LimitKind.NEUMANN:
            return 0.0
        if self.kind == LimitKind.ROBIN:
            return self.robin_A
        return self.robin_A + self.mu

    @property
    def boundary_tag(self) -> BoundaryTag:
        if self.kind == LimitKind.DIRICHLET:
            return BoundaryTag.DIRICHLET
        if self.kind == LimitKind.NEUMANN:
            return BoundaryTag.NEUMANN
        return BoundaryTag.ROBIN

    def weight(self, theta_map: ThetaMap) -> ArcMap | None:
        """Robin weight w(s), or None when no boundary term is assembled."""
        if self.kind in (LimitKind.DIRICHLET, LimitKind.NEUMANN):
            return None
        coupling = self.coupling
        if self.kind == LimitKind.ROBIN:
            theta_prime = theta_map.limit_theta_prime
        else:
            theta_prime = theta_map.theta_prime

        def weight(s):
            return coupling * np.asarray(theta_prime(s), dtype=float)

        return weight

    @property
    def label(self) -> str:
        if self.kind == LimitKind.ROBIN:
            return f"robin(A={self.robin_A:g})"
        if self.kind == LimitKind.SHIFTED_ROBIN:
            return f"shifted_robin(A={self.robin_A:g}, mu={self.mu:g})"
        return self.kind.value


@dataclass(frozen=True)
class OracleMode:
    """Separated disk mode J_n(x r) cos/sin(n phi) with x^2 = eigenvalue."""

    n: int
    m: int
    root: float
    eigenvalue: float
    multiplicity: int


@dataclass(frozen=True)
class DiskOracle:
    """Analytic unit-disk eigenvalues, ascending, counting multiplicity."""

    problem: LimitProblem
    modes: tuple[OracleMode, ...]
    count: int

    @property
    def eigenvalues(self) -> np.ndarray:
        """The lowest `count` eigenvalues, each repeated by multiplicity."""
        values = [mode.eigenvalue for mode in self.modes for _ in range(mode.multiplicity)]
        return np.asarray(values[: self.count])

    def mode_of(self, index: int) -> OracleMode:
        """Separated mode owning position `index` of the expanded list."""
        position = 0
        for mode in self.modes:
            position += mode.multiplicity
            if index < position:
                return mode
        raise ConfigurationError(f"Oracle holds {self.count} eigenvalues, asked for {index}")

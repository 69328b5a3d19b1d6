"""Data models for boundary geometry and arc configurations."""

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import bisect

from app.errors import GeometryError

# Vectorized map of arclength values: accepts scalars or arrays.
ArcMap = Callable[[np.ndarray | float], np.ndarray]


class CurveKind(str, Enum):
    """Supported smooth closed boundary curves."""

    CIRCLE = "circle"
    ELLIPSE = "ellipse"


class ThetaKind(str, Enum):
    """Families of boundary reparametrizations."""

    IDENTITY = "identity"
    PERTURBED = "perturbed"


@dataclass(frozen=True)
class BoundaryCurve:
    """Smooth closed curve parametrized by arclength, traversed counterclockwise."""

    kind: CurveKind
    total_length: float
    area: float
    position: ArcMap
    tangent: ArcMap
    outward_normal: ArcMap
    curvature: ArcMap

    def samples(self, count: int = 1000) -> np.ndarray:
        """Return `count` equispaced arclength samples in [0, S)."""
        return np.linspace(0.0, self.total_length, count, endpoint=False)


@dataclass(frozen=True)
class ThetaMap:
    """Increasing reparametrization s -> theta(s) of the boundary onto [0, 2pi]."""

    kind: ThetaKind
    total_length: float
    epsilon: float
    theta: ArcMap
    theta_prime: ArcMap
    limit_theta_prime: ArcMap
    bounds: tuple[float, float]
    sigma: float

    def extended(self, s: np.ndarray | float) -> np.ndarray:
        """Periodic extension theta(s - kS) + 2pi k, valid for any real s."""
        s = np.asarray(s, dtype=float)
        k = np.floor(s / self.total_length)
        return self.theta(s - k * self.total_length) + 2.0 * math.pi * k

    def inverse(self, value: float) -> float:
        """Solve extended(s) = value for s by bisection to 1e-12.

        Raises:
            GeometryError: If the bracket does not contain a root
        """
        k = math.floor(value / (2.0 * math.pi))
        target = value - 2.0 * math.pi * k
        try:
            root = bisect(
                lambda s: float(self.theta(s)) - target,
                0.0,
                self.total_length,
                xtol=1e-12,
                rtol=4 * np.finfo(float).eps,
                maxiter=200,
            )
        except (ValueError, RuntimeError) as e:
            raise GeometryError(f"Failed to invert theta at {value:.6g}: {e}") from e
        return root + k * self.total_length


@dataclass(frozen=True, eq=False)
class AlternationConfig:
    """Dirichlet arcs {-eps a_j < s - s_j < eps b_j} on an otherwise Neumann boundary.

    Arc half-lengths a_j, b_j are dimensionless; arcs are stored in cyclic order and
    index arithmetic wraps (a_N is a_0).
    """

    n_arcs: int
    anchors: np.ndarray
    a: np.ndarray
    b: np.ndarray
    eta: float
    robin_A: float
    total_length: float
    rule: str = "custom"

    @property
    def epsilon(self) -> float:
        return 2.0 / self.n_arcs

    @property
    def anchor(self) -> float:
        return float(self.anchors[0])

    @property
    def starts(self) -> np.ndarray:
        return self.anchors - self.epsilon * self.a

    @property
    def ends(self) -> np.ndarray:
        return self.anchors + self.epsilon * self.b

    @property
    def arc_lengths(self) -> np.ndarray:
        return self.epsilon * (self.a + self.b)

    @property
    def nonempty(self) -> np.ndarray:
        """Indices of arcs with positive length."""
        return np.flatnonzero(self.a + self.b > 0)

    @property
    def dirichlet_length(self) -> float:
        return float(np.sum(self.arc_lengths))

    def endpoints(self) -> np.ndarray:
        """Endpoints of nonempty arcs reduced into [0, S)."""
        idx = self.nonempty
        points = np.concatenate([self.starts[idx], self.ends[idx]])
        return np.mod(points, self.total_length)

    def contains_points(self, s: np.ndarray) -> np.ndarray:
        """Boolean mask of arclength points lying inside some open arc."""
        s = np.mod(np.asarray(s, dtype=float), self.total_length)
        inside = np.zeros(s.shape, dtype=bool)
        for j in self.nonempty:
            offset = np.mod(s - self.starts[j], self.total_length)
            inside |= (offset > 0) & (offset < self.arc_lengths[j])
        return inside


@dataclass(frozen=True, eq=False)
class ArcQuantities:
    """Per-arc lengths in s and in the theta-image, with their cyclic differences."""

    d: np.ndarray
    d_img: np.ndarray
    alpha_img: np.ndarray
    beta_img: np.ndarray
    a_img: np.ndarray
    b_img: np.ndarray
    delta: np.ndarray
    delta_img: np.ndarray
    lattice: np.ndarray = field(repr=False)

    @property
    def delta_star(self) -> float:
        """max_j |d_{j+1} - d_j|."""
        return float(np.max(np.abs(self.delta)))

    @property
    def delta_img_star(self) -> float:
        """max_j |d^{j+1} - d^j|."""
        return float(np.max(np.abs(self.delta_img)))


@dataclass(frozen=True)
class SmallParams:
    """The small parameters of one sweep point."""

    epsilon: float
    eta: float
    mu: float
    robin_A: float
    sigma: float = 0.0

    @property
    def coupling(self) -> float:
        """A + mu, the Robin coefficient multiplying theta'."""
        return self.robin_A + self.mu

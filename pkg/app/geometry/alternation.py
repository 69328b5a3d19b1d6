"""Rules generating the Dirichlet arc family and the configuration builder."""

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import Any

import numpy as np

from app.errors import GeometryError

from .models import AlternationConfig, ThetaMap

logger = logging.getLogger(__name__)


class ArcRule(ABC):
    """Abstract rule producing half-lengths (a_j, b_j) for N anchors."""

    name: str = "abstract"

    @abstractmethod
    def half_lengths(
        self, theta_map: ThetaMap, anchors: np.ndarray, eta: float
    ) -> tuple[np.ndarray, np.ndarray]:
        """Return dimensionless half-lengths (a, b), one entry per anchor."""
        pass


class UniformRule(ArcRule):
    """Every arc gets the same (a, b)."""

    name = "uniform"

    def __init__(self, a: float = 0.0, b: float = 0.0):
        if a < 0 or b < 0:
            raise GeometryError(f"Half-lengths must be non-negative, got a={a}, b={b}")
        self.a = a
        self.b = b

    def half_lengths(self, theta_map, anchors, eta):
        n = len(anchors)
        return np.full(n, self.a), np.full(n, self.b)


class ScaledRule(ArcRule):
    """a_j + b_j = 2 eta d, split by `fraction` (share of a)."""

    name = "scaled"

    def __init__(self, d: float = 1.0, fraction: float = 0.5):
        if d < 0 or not 0.0 <= fraction <= 1.0:
            raise GeometryError(
                f"Scaled rule needs d >= 0 and fraction in [0, 1], got {d}, {fraction}"
            )
        self.d = d
        self.fraction = fraction

    def _totals(self, n: int, eta: float) -> np.ndarray:
        return np.full(n, 2.0 * eta * self.d)

    def half_lengths(self, theta_map, anchors, eta):
        total = self._totals(len(anchors), eta)
        return total * self.fraction, total * (1.0 - self.fraction)


class ModulatedRule(ScaledRule):
    """Slowly varying lengths d_j = d (1 + amplitude sin(2 pi j / N))."""

    name = "modulated"

    def __init__(self, d: float = 1.0, amplitude: float = 0.0, fraction: float = 0.5):
        super().__init__(d, fraction)
        if abs(amplitude) >= 1:
            raise GeometryError(f"Modulation amplitude must lie in (-1, 1), got {amplitude}")
        self.amplitude = amplitude

    def _totals(self, n: int, eta: float) -> np.ndarray:
        j = np.arange(n)
        return 2.0 * eta * self.d * (1.0 + self.amplitude * np.sin(2.0 * math.pi * j / n))


class ImageUniformRule(ScaledRule):
    """Arcs whose theta-images all have half-lengths (2 eta d fraction, 2 eta d (1 - fraction))."""

    name = "image_uniform"

    def half_lengths(self, theta_map, anchors, eta):
        eps = 2.0 / len(anchors)
        a_img = 2.0 * eta * self.d * self.fraction
        b_img = 2.0 * eta * self.d * (1.0 - self.fraction)
        a = np.empty(len(anchors))
        b = np.empty(len(anchors))
        for j, s_j in enumerate(anchors):
            t_j = float(theta_map.extended(s_j))
            a[j] = (s_j - theta_map.inverse(t_j - eps * a_img)) / eps
            b[j] = (theta_map.inverse(t_j + eps * b_img) - s_j) / eps
        return np.maximum(a, 0.0), np.maximum(b, 0.0)


class DriftingRule(ArcRule):
    """a_j = eps j (1 + eps sin j) / 2 and b_j = 1 - eps j / 2: a nonperiodic drift."""

    name = "remark14"

    def half_lengths(self, theta_map, anchors, eta):
        eps = 2.0 / len(anchors)
        j = np.arange(len(anchors), dtype=float)
        return eps * j * (1.0 + eps * np.sin(j)) / 2.0, 1.0 - eps * j / 2.0


class CustomRule(ArcRule):
    """Explicit table of (a_j, b_j)."""

    name = "custom"

    def __init__(self, table: Sequence[Sequence[float]] = ()):
        self.table = np.asarray(table, dtype=float).reshape(-1, 2)
        if np.any(self.table < 0):
            raise GeometryError("Custom arc table contains negative half-lengths")

    def half_lengths(self, theta_map, anchors, eta):
        if len(self.table) != len(anchors):
            raise GeometryError(
                f"Custom arc table has {len(self.table)} rows but N = {len(anchors)}"
            )
        return self.table[:, 0].copy(), self.table[:, 1].copy()


class ArcRuleFactory:
    """Factory for creating arc rules by name."""

    _rules: dict[str, type[ArcRule]] = {}

    @classmethod
    def register(cls, name: str, rule_class: type[ArcRule]) -> None:
        """Register a rule class."""
        cls._rules[name] = rule_class

    @classmethod
    def create(cls, name: str, **params: Any) -> ArcRule:
        """Create a rule instance.

        Args:
            name: Rule name
            **params: Rule-specific parameters

        Returns:
            Rule instance

        Raises:
            GeometryError: If the rule is not registered
        """
        if name not in cls._rules:
            available = ", ".join(sorted(cls._rules))
            raise GeometryError(f"Unknown arc rule '{name}'. Available: {available}")
        return cls._rules[name](**params)

    @classmethod
    def list_rules(cls) -> list[str]:
        """List registered rule names."""
        return sorted(cls._rules)


for _rule in (UniformRule, ScaledRule, ModulatedRule, ImageUniformRule, DriftingRule, CustomRule):
    ArcRuleFactory.register(_rule.name, _rule)
ArcRuleFactory.register("drifting", DriftingRule)


def compute_anchors(theta_map: ThetaMap, n_arcs: int, anchor: float = 0.0) -> np.ndarray:
    """Solve theta(s_j) = theta(s_0) + eps pi j for j = 0..N-1."""
    theta0 = float(theta_map.extended(anchor))
    eps = 2.0 / n_arcs
    anchors = np.empty(n_arcs)
    anchors[0] = anchor
    for j in range(1, n_arcs):
        anchors[j] = theta_map.inverse(theta0 + eps * math.pi * j)
    return anchors


def check_disjoint(cfg: AlternationConfig) -> None:
    """Raise if two consecutive nonempty arcs overlap.

    Raises:
        GeometryError: Naming the colliding pair
    """
    S = cfg.total_length
    if np.any(cfg.arc_lengths >= S):
        raise GeometryError("An arc covers the whole boundary")
    idx = cfg.nonempty
    if len(idx) < 2:
        return
    starts = cfg.starts[idx]
    ends = cfg.ends[idx]
    for pos, j in enumerate(idx):
        nxt = (pos + 1) % len(idx)
        next_start = starts[nxt] + (S if nxt == 0 else 0.0)
        if ends[pos] > next_start + 1e-14 * S:
            raise GeometryError(
                f"Arcs {j} and {idx[nxt]} overlap: arc {j} ends at {ends[pos]:.12g}, "
                f"arc {idx[nxt]} starts at {next_start:.12g}"
            )


def check_length_bounds(cfg: AlternationConfig, theta_map: ThetaMap, c3: float) -> None:
    """Check c3 eta <= a_j + b_j <= 2 eta / c2 for every arc.

    Raises:
        GeometryError: Naming the first offending arc
    """
    totals = cfg.a + cfg.b
    upper = 2.0 * cfg.eta / theta_map.bounds[1]
    lower = c3 * cfg.eta
    for j, total in enumerate(totals):
        if total < lower * (1 - 1e-12) or total > upper * (1 + 1e-12):
            raise GeometryError(
                f"Arc {j} violates the length bounds: a+b = {total:.6g} "
                f"not in [{lower:.6g}, {upper:.6g}]"
            )


def generate_alternation(
    theta_map: ThetaMap,
    n_arcs: int,
    rule: ArcRule,
    eta: float,
    robin_A: float = 0.0,
    anchor: float = 0.0,
    c3: float | None = None,
) -> AlternationConfig:
    """Generate the arc family for N arcs.

    Args:
        theta_map: Reparametrization fixing the anchor lattice
        n_arcs: Number of arcs N (even, at least 4), eps = 2/N
        rule: Half-length rule
        eta: Arc scale eta(eps)
        robin_A: Limit coefficient A
        anchor: s_0
        c3: When given, assert c3 eta <= a_j + b_j <= 2 eta / c2

    Returns:
        Alternation configuration with disjoint arcs

    Raises:
        GeometryError: On odd or too small N, overlapping arcs, or violated bounds
    """
    if n_arcs < 4 or n_arcs % 2:
        raise GeometryError(f"N must be even and at least 4, got {n_arcs}")
    if not eta > 0:
        raise GeometryError(f"eta must be positive, got {eta}")

    anchors = compute_anchors(theta_map, n_arcs, anchor)
    a, b = rule.half_lengths(theta_map, anchors, eta)
    cfg = AlternationConfig(
        n_arcs=n_arcs,
        anchors=anchors,
        a=np.asarray(a, dtype=float),
        b=np.asarray(b, dtype=float),
        eta=eta,
        robin_A=robin_A,
        total_length=theta_map.total_length,
        rule=rule.name,
    )
    check_disjoint(cfg)
    if c3 is not None:
        check_length_bounds(cfg, theta_map, c3)

    logger.debug(
        f"Generated {rule.name} alternation: N={n_arcs}, eta={eta:.4g}, "
        f"Dirichlet length={cfg.dirichlet_length:.4g}"
    )
    return cfg


def contains(inner: AlternationConfig, outer: AlternationConfig, tol: float = 1e-12) -> bool:
    """Whether every nonempty arc of `inner` lies inside an arc of `outer`."""
    S = outer.total_length
    for j in inner.nonempty:
        start = inner.starts[j]
        length = inner.arc_lengths[j]
        covered = False
        for i in outer.nonempty:
            offset = np.mod(start - outer.starts[i] + tol, S) - tol
            if offset >= -tol and offset + length <= outer.arc_lengths[i] + tol:
                covered = True
                break
        if not covered:
            return False
    return True

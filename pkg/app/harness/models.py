"""Study documents, sweep records and check reports."""

import math
from enum import Enum
from typing import Any

from pydantic import BaseModel, Field, field_validator, model_validator

from app.asymptotics import BoundReport
from app.errors import CheckViolation
from app.geometry import (
    ArcRule,
    ArcRuleFactory,
    BoundaryCurve,
    CurveKind,
    ThetaKind,
    ThetaMap,
    build_theta_map,
    eta_from_mu,
    make_curve,
)


class Regime(str, Enum):
    """Which limiting problem a sweep approaches."""

    DIRICHLET_LIMIT = "dirichlet_limit"
    NEUMANN_LIMIT = "neumann_limit"
    ROBIN_LIMIT = "robin_limit"


class EtaMode(str, Enum):
    """How eta is chosen at each sweep point."""

    FIXED = "fixed"
    FROM_MU = "from_mu"


class RecordStatus(str, Enum):
    OK = "ok"
    FAILED = "failed"


class CurveSpec(BaseModel):
    """Boundary curve: a circle of given radius or an ellipse."""

    kind: CurveKind = CurveKind.CIRCLE
    radius: float = Field(default=1.0, gt=0)
    semi_x: float = Field(default=1.0, gt=0)
    semi_y: float = Field(default=1.0, gt=0)

    def build(self) -> BoundaryCurve:
        return make_curve(self.kind, radius=self.radius, semi_x=self.semi_x, semi_y=self.semi_y)


class ThetaSpec(BaseModel):
    """Boundary reparametrization."""

    kind: ThetaKind = ThetaKind.IDENTITY
    coefficients: list[float] = Field(default_factory=list)
    phases: list[float] = Field(default_factory=list)
    rate: float | None = None

    def build(self, curve: BoundaryCurve, epsilon: float) -> ThetaMap:
        return build_theta_map(
            self.kind, curve, epsilon, self.coefficients, self.phases, self.rate
        )


class ArcRuleSpec(BaseModel):
    """Registered arc rule name with its keyword parameters."""

    name: str = "scaled"
    params: dict[str, Any] = Field(default_factory=dict)

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        if v not in ArcRuleFactory.list_rules():
            raise ValueError(f"Unknown arc rule '{v}'. Available: {ArcRuleFactory.list_rules()}")
        return v

    def build(self) -> ArcRule:
        return ArcRuleFactory.create(self.name, **self.params)


class EtaRule(BaseModel):
    """Fixed eta, or eta derived from (eps, A, mu) as exp(-1 / (eps (A + mu)))."""

    mode: EtaMode = EtaMode.FIXED
    eta: float | None = Field(default=None, gt=0)
    mu: float | None = None

    @model_validator(mode="after")
    def validate_fields(self) -> "EtaRule":
        if self.mode == EtaMode.FIXED and self.eta is None:
            raise ValueError("A fixed eta rule needs 'eta'")
        if self.mode == EtaMode.FROM_MU and self.mu is None:
            raise ValueError("An eta-from-mu rule needs 'mu'")
        return self

    def resolve(self, epsilon: float, robin_A: float) -> float:
        if self.mode == EtaMode.FIXED:
            return float(self.eta)
        return eta_from_mu(epsilon, robin_A, float(self.mu))


class MeshSpec(BaseModel):
    """Interior edge length, edges per arc and endpoint grading (settings defaults when None)."""

    h: float = Field(default=0.05, gt=0)
    n_min: int = Field(default=4, ge=4)
    grading_ratio: float | None = Field(default=None, gt=1)
    junction_refinement: float | None = Field(default=None, ge=1)


class Tolerances(BaseModel):
    """Solver tolerance (settings default when omitted), sign-check slack and mu-slope gap.

    The mu-slope gap is widened to h^2 on coarse meshes, where chords and arcs differ.
    """

    eig: float | None = Field(default=None, ge=1e-12, le=1e-6)
    sign: float = Field(default=1e-8, gt=0)
    slope: float = Field(default=1e-3, gt=0)


class StudyConfig(BaseModel):
    """A complete sweep description; every output is a function of this document."""

    name: str = "study"
    curve: CurveSpec = Field(default_factory=CurveSpec)
    theta: ThetaSpec = Field(default_factory=ThetaSpec)
    rule: ArcRuleSpec = Field(default_factory=ArcRuleSpec)
    regime: Regime
    robin_A: float = Field(default=0.0, ge=0)
    sweep: list[int]
    eta: EtaRule
    mesh: MeshSpec = Field(default_factory=MeshSpec)
    modes: int = Field(default=3, ge=1, le=20)
    anchor: float = 0.0
    tolerances: Tolerances = Field(default_factory=Tolerances)

    @field_validator("sweep")
    @classmethod
    def validate_sweep(cls, v: list[int]) -> list[int]:
        if not v:
            raise ValueError("Sweep must contain at least one N")
        if any(n < 4 or n % 2 for n in v):
            raise ValueError(f"Every N must be even and at least 4, got {v}")
        if any(b <= a for a, b in zip(v, v[1:], strict=False)):
            raise ValueError(f"Sweep values must be strictly increasing, got {v}")
        return v

    @model_validator(mode="after")
    def validate_regime(self) -> "StudyConfig":
        if self.regime == Regime.DIRICHLET_LIMIT:
            if self.eta.mode != EtaMode.FIXED:
                raise ValueError("Dirichlet-limit sweeps need a fixed eta")
            if not 0.0 < self.eta.eta <= math.pi / 2:
                raise ValueError(f"Dirichlet-limit eta must lie in (0, pi/2], got {self.eta.eta}")
        else:
            if self.eta.mode != EtaMode.FROM_MU:
                raise ValueError(f"{self.regime.value} sweeps derive eta from mu")
            if self.regime == Regime.NEUMANN_LIMIT and self.robin_A != 0:
                raise ValueError("Neumann-limit sweeps need A = 0")
            if self.regime == Regime.ROBIN_LIMIT and self.robin_A <= 0:
                raise ValueError("Robin-limit sweeps need A > 0")
            if self.robin_A + self.eta.mu <= 0:
                raise ValueError(f"A + mu must be positive, got {self.robin_A + self.eta.mu}")
        return self


class ModeResult(BaseModel):
    """One eigenvalue of a sweep point next to its limit and prediction.

    `limit` is lambda_0 of the limiting problem; `base` is the eigenvalue the
    prediction corrects (the shifted Robin value in Robin and Neumann regimes).
    """

    mode: int
    lambda_eps: float
    limit: float
    base: float
    prediction: float
    first_order: float | None = None
    raw_err: float
    norm_remainder: float
    residual: float
    defect: float | None = None


class StudyRecord(BaseModel):
    n_arcs: int
    epsilon: float
    eta: float | None = None
    mu: float | None = None
    robin_A: float
    sigma: float | None = None
    eta0: float | None = None
    arc_image_ratio: float | None = None
    h: float
    status: RecordStatus = RecordStatus.OK
    reason: str | None = None
    modes: list[ModeResult] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == RecordStatus.OK


class RateFit(BaseModel):
    """Least-squares line through (ln x, ln y)."""

    slope: float
    intercept: float
    r_squared: float
    ratios: list[float]


class MonotonicityReport(BaseModel):
    """Eigenvalues along a chain of nested Dirichlet sets, empty set first."""

    labels: list[str]
    eigenvalues: list[list[float]]
    max_decrease: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_decrease <= self.tolerance

    def raise_for_violation(self) -> None:
        if not self.passed:
            raise CheckViolation(
                f"Eigenvalues decrease by {self.max_decrease:.3e} along a nested chain",
                details=self.model_dump(mode="json"),
            )


class SlopeReport(BaseModel):
    """Finite-difference mu-slope of a shifted Robin eigenvalue against the boundary integral."""

    mode: int
    robin_A: float
    mus: list[float]
    values: list[float]
    central_slopes: list[float]
    extrapolated_slope: float
    analytic_slope: float
    tolerance: float
    remainder_fit: RateFit | None = None

    @property
    def discrepancy(self) -> float:
        return abs(self.extrapolated_slope - self.analytic_slope)

    @property
    def passed(self) -> bool:
        return self.discrepancy <= self.tolerance

    def raise_for_violation(self) -> None:
        if not self.passed:
            raise CheckViolation(
                f"mu-slope {self.extrapolated_slope:.8g} differs from the boundary "
                f"integral {self.analytic_slope:.8g} by {self.discrepancy:.3e}",
                details=self.model_dump(mode="json"),
            )


class StudyDocument(BaseModel):
    """Everything a study produced: config, per-point records, fits and check reports."""

    config: StudyConfig
    records: list[StudyRecord]
    fits: dict[str, RateFit] = Field(default_factory=dict)
    bounds: list[BoundReport] = Field(default_factory=list)
    monotonicity: list[MonotonicityReport] = Field(default_factory=list)
    slopes: list[SlopeReport] = Field(default_factory=list)

    @property
    def failed(self) -> list[StudyRecord]:
        return [r for r in self.records if not r.ok]

    def raise_for_violation(self) -> None:
        """Raise the first failing sign law, monotonicity or slope check."""
        for report in [*self.bounds, *self.monotonicity, *self.slopes]:
            report.raise_for_violation()

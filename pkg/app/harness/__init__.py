"""Sweeps over N, convergence fits, monotonicity and slope checks, and study reports."""

from app.harness.checks import (
    bound_reports,
    check_monotonicity,
    dirichlet_sandwich,
    mu_slope_check,
    remainder_fits,
)
from app.harness.models import (
    ArcRuleSpec,
    CurveSpec,
    EtaMode,
    EtaRule,
    MeshSpec,
    ModeResult,
    MonotonicityReport,
    RateFit,
    RecordStatus,
    Regime,
    SlopeReport,
    StudyConfig,
    StudyDocument,
    StudyRecord,
    ThetaSpec,
    Tolerances,
)
from app.harness.rates import fit_rate
from app.harness.report import emit_report, load_study, plot_convergence, write_results_csv
from app.harness.study import monotonicity_reports, run_study, slope_reports
from app.harness.sweep import (
    evaluate_point,
    limit_problem,
    point_geometry,
    run_sweep,
    run_sweep_async,
)

__all__ = [
    "ArcRuleSpec",
    "CurveSpec",
    "EtaMode",
    "EtaRule",
    "MeshSpec",
    "ModeResult",
    "MonotonicityReport",
    "RateFit",
    "RecordStatus",
    "Regime",
    "SlopeReport",
    "StudyConfig",
    "StudyDocument",
    "StudyRecord",
    "ThetaSpec",
    "Tolerances",
    "bound_reports",
    "check_monotonicity",
    "dirichlet_sandwich",
    "emit_report",
    "evaluate_point",
    "fit_rate",
    "limit_problem",
    "load_study",
    "monotonicity_reports",
    "mu_slope_check",
    "plot_convergence",
    "point_geometry",
    "remainder_fits",
    "run_study",
    "run_sweep",
    "run_sweep_async",
    "slope_reports",
    "write_results_csv",
]

"""A full study: sweep, rate fits, bound checks, nesting and mu-slope checks in one document."""

import logging

from app.errors import LabError
from app.mesh import triangulate

from .checks import bound_reports, dirichlet_sandwich, mu_slope_check, remainder_fits
from .models import (
    MonotonicityReport,
    Regime,
    SlopeReport,
    StudyConfig,
    StudyDocument,
    StudyRecord,
)
from .sweep import point_geometry, run_sweep

logger = logging.getLogger(__name__)

SLOPE_STEPS = (0.01, 0.005, 0.0025)


def _reference(records: list[StudyRecord]) -> StudyRecord | None:
    """The successful point with the largest eps, where arcs are easiest to resolve."""
    return next((r for r in records if r.ok), None)


def monotonicity_reports(
    config: StudyConfig, records: list[StudyRecord]
) -> list[MonotonicityReport]:
    """Sandwich the reference configuration between a smaller family and the anchors."""
    reference = _reference(records)
    if reference is None:
        return []
    curve, theta_map, _, outer = point_geometry(config, reference.n_arcs)
    try:
        report = dirichlet_sandwich(
            curve, theta_map, outer, config.mesh.h, config.mesh.n_min, config.modes
        )
    except LabError as e:
        logger.warning(f"Monotonicity check skipped at N={reference.n_arcs}: {e}")
        return []
    return [report]


def slope_reports(config: StudyConfig, records: list[StudyRecord]) -> list[SlopeReport]:
    """mu-slope of the ground state at mu = 0 for Robin and Neumann regimes."""
    reference = _reference(records)
    if config.regime == Regime.DIRICHLET_LIMIT or reference is None:
        return []
    curve, theta_map, _, _ = point_geometry(config, reference.n_arcs)
    steps = [-s for s in SLOPE_STEPS] + list(SLOPE_STEPS)
    tol = max(config.tolerances.slope, config.mesh.h**2)
    try:
        mesh = triangulate(curve, None, config.mesh.h, config.mesh.n_min)
        report = mu_slope_check(mesh, theta_map, config.robin_A, steps, mode=0, tol=tol)
    except LabError as e:
        logger.warning(f"mu-slope check skipped: {e}")
        return []
    return [report]


def run_study(config: StudyConfig, jobs: int | None = None) -> StudyDocument:
    """Run the sweep of `config` and attach fits, bound reports and the structural checks.

    Violations are recorded, not raised; call `StudyDocument.raise_for_violation`
    after emitting the report.
    """
    records = run_sweep(config, jobs)
    document = StudyDocument(
        config=config,
        records=records,
        fits=remainder_fits(records),
        bounds=bound_reports(records, config.regime, config.tolerances.sign),
        monotonicity=monotonicity_reports(config, records),
        slopes=slope_reports(config, records),
    )
    for name, fit in document.fits.items():
        logger.info(f"{name}: slope {fit.slope:.3f} (R^2 {fit.r_squared:.3f})")
    return document

"""Sweep runner: one perturbed and one limiting spectrum per N, with predictions."""

import asyncio
import logging
import math

import numpy as np
from tqdm.asyncio import tqdm

from app.asymptotics import (
    Prediction,
    dirichlet_prediction,
    first_order_prediction,
    two_term_prediction,
)
from app.config import get_settings
from app.errors import LabError, NumericalError
from app.fem import Spectrum, assemble, eigenvector_defect, solve_eigs
from app.geometry import (
    AlternationConfig,
    BoundaryCurve,
    SmallParams,
    ThetaMap,
    arc_image_ratio,
    arc_quantities,
    eta0,
    generate_alternation,
)
from app.homogenized import LimitProblem, orthogonalize_clusters, solve_limit
from app.mesh import triangulate

from .models import ModeResult, Regime, RecordStatus, StudyConfig, StudyRecord

logger = logging.getLogger(__name__)


def limit_problem(config: StudyConfig) -> LimitProblem:
    """The limiting problem a sweep converges to."""
    if config.regime == Regime.DIRICHLET_LIMIT:
        return LimitProblem.dirichlet()
    if config.regime == Regime.NEUMANN_LIMIT:
        return LimitProblem.neumann()
    return LimitProblem.robin(config.robin_A)


def _implied_mu(epsilon: float, eta: float, robin_A: float) -> float | None:
    """mu with eta = exp(-1 / (eps (A + mu))); undefined for eta >= 1."""
    if not 0.0 < eta < 1.0:
        return None
    return -1.0 / (epsilon * math.log(eta)) - robin_A


def _paired(base: Spectrum, predictions: list[Prediction]) -> np.ndarray:
    """Prediction values sorted within each cluster of the base spectrum.

    Split clusters are compared as multisets: the i-th smallest perturbed
    eigenvalue of a cluster goes with the i-th smallest prediction.
    """
    values = np.array([p.value for p in predictions])
    grouped = base.regroup(get_settings().match_tolerance)
    for members in grouped.clusters():
        values[members] = np.sort(values[members])
    return values


def point_geometry(
    config: StudyConfig, n_arcs: int
) -> tuple[BoundaryCurve, ThetaMap, float, AlternationConfig]:
    """Curve, theta map, eta and arc configuration of one sweep point."""
    epsilon = 2.0 / n_arcs
    curve = config.curve.build()
    theta_map = config.theta.build(curve, epsilon)
    eta = config.eta.resolve(epsilon, config.robin_A)
    alternation = generate_alternation(
        theta_map, n_arcs, config.rule.build(), eta, config.robin_A, config.anchor
    )
    return curve, theta_map, eta, alternation


def _evaluate(config: StudyConfig, n_arcs: int) -> StudyRecord:
    epsilon = 2.0 / n_arcs
    curve, theta_map, eta, alternation = point_geometry(config, n_arcs)
    if config.regime == Regime.DIRICHLET_LIMIT:
        mu = _implied_mu(epsilon, eta, config.robin_A)
    else:
        mu = float(config.eta.mu)

    q = arc_quantities(alternation, theta_map)
    mesh = triangulate(
        curve,
        alternation,
        config.mesh.h,
        config.mesh.n_min,
        grading_ratio=config.mesh.grading_ratio,
        junction_refinement=config.mesh.junction_refinement,
    )

    k = config.modes
    tol = config.tolerances.eig
    perturbed = solve_eigs(assemble(mesh), k, tol)
    limit = solve_limit(limit_problem(config), mesh, theta_map, k, tol)

    first_order: list[float | None] = [None] * k
    if config.regime == Regime.DIRICHLET_LIMIT:
        base = limit
        predictions = [dirichlet_prediction(limit, theta_map, eta, m, epsilon) for m in range(k)]
        scale = epsilon * abs(math.log(math.sin(eta))) or epsilon
    else:
        params = SmallParams(
            epsilon=epsilon, eta=eta, mu=mu, robin_A=config.robin_A, sigma=theta_map.sigma
        )
        rotated = orthogonalize_clusters(limit, theta_map.limit_theta_prime)
        slopes = [first_order_prediction(rotated, theta_map, m, params) for m in range(k)]
        first_order = list(_paired(rotated, slopes))

        shifted_problem = LimitProblem.shifted_robin(config.robin_A, mu)
        shifted = solve_limit(shifted_problem, mesh, theta_map, k, tol)
        base = orthogonalize_clusters(shifted, theta_map.theta_prime)
        predictions = [
            two_term_prediction(base, theta_map, alternation, q, m, params) for m in range(k)
        ]
        scale = epsilon * params.coupling

    values = _paired(base, predictions)
    modes = []
    for m in range(k):
        lam = float(perturbed.eigenvalues[m])
        modes.append(
            ModeResult(
                mode=m,
                lambda_eps=lam,
                limit=float(limit.eigenvalues[m]),
                base=predictions[m].base,
                prediction=float(values[m]),
                first_order=None if first_order[m] is None else float(first_order[m]),
                raw_err=lam - float(limit.eigenvalues[m]),
                norm_remainder=abs(lam - float(values[m])) / scale,
                residual=float(perturbed.residuals[m]),
                defect=eigenvector_defect(perturbed, limit, m),
            )
        )

    return StudyRecord(
        n_arcs=n_arcs,
        epsilon=epsilon,
        eta=eta,
        mu=mu,
        robin_A=config.robin_A,
        sigma=theta_map.sigma,
        eta0=eta0(alternation, theta_map),
        arc_image_ratio=arc_image_ratio(q, epsilon),
        h=config.mesh.h,
        modes=modes,
    )


def evaluate_point(config: StudyConfig, n_arcs: int) -> StudyRecord:
    """Solve one sweep point; lab errors become a failed record with the reason.

    Args:
        config: Study configuration
        n_arcs: Number of arcs N

    Returns:
        Record with one ModeResult per mode, or a failed record
    """
    try:
        record = _evaluate(config, n_arcs)
    except LabError as e:
        logger.warning(f"Sweep point N={n_arcs} failed: {e}")
        return StudyRecord(
            n_arcs=n_arcs,
            epsilon=2.0 / n_arcs,
            robin_A=config.robin_A,
            h=config.mesh.h,
            status=RecordStatus.FAILED,
            reason=str(e),
        )
    logger.info(
        f"N={n_arcs}: lambda_1={record.modes[0].lambda_eps:.8g}, "
        f"remainder={record.modes[0].norm_remainder:.3e}"
    )
    return record


async def run_sweep_async(config: StudyConfig, jobs: int | None = None) -> list[StudyRecord]:
    """Evaluate every sweep point on a bounded thread pool.

    Args:
        config: Study configuration
        jobs: Concurrent points (settings default when omitted)

    Returns:
        Records ordered by decreasing eps, independent of completion order

    Raises:
        NumericalError: If every point failed
    """
    settings = get_settings()
    semaphore = asyncio.Semaphore(jobs or settings.sweep_jobs)

    async def run_point(n_arcs: int) -> StudyRecord:
        async with semaphore:
            return await asyncio.to_thread(evaluate_point, config, n_arcs)

    tasks = [asyncio.create_task(run_point(n)) for n in config.sweep]
    records = []
    for finished in tqdm.as_completed(
        tasks,
        total=len(tasks),
        desc="🔬 Sweep points",
        ncols=100,
        disable=not settings.show_progress,
    ):
        records.append(await finished)

    records.sort(key=lambda r: r.epsilon, reverse=True)
    failed = [r for r in records if not r.ok]
    if len(failed) == len(records):
        reasons = "; ".join(f"N={r.n_arcs}: {r.reason}" for r in failed)
        raise NumericalError(f"All {len(records)} sweep points failed: {reasons}")
    logger.info(f"Sweep '{config.name}': {len(records) - len(failed)} ok, {len(failed)} failed")
    return records


def run_sweep(config: StudyConfig, jobs: int | None = None) -> list[StudyRecord]:
    """Synchronous wrapper around run_sweep_async."""
    return asyncio.run(run_sweep_async(config, jobs))

"""Checks over sweeps and configuration chains: bounds, nesting monotonicity, mu-slopes."""

import logging
from collections.abc import Sequence

import numpy as np

from app.asymptotics import (
    BoundFamily,
    BoundReport,
    BoundSample,
    robin_first_order,
    two_sided_check,
)
from app.asymptotics.bounds import SIGN_TOLERANCE
from app.config import get_settings
from app.errors import ConfigurationError
from app.fem import assemble, solve_eigs
from app.geometry import (
    AlternationConfig,
    BoundaryCurve,
    ImageUniformRule,
    ThetaMap,
    arc_quantities,
    contains,
    generate_alternation,
)
from app.homogenized import LimitProblem, orthogonalize_clusters, solve_limit
from app.mesh import BoundaryTag, Mesh, retag, triangulate, with_uniform_tag

from .models import MonotonicityReport, RateFit, Regime, SlopeReport, StudyRecord
from .rates import MIN_POINTS, fit_rate

logger = logging.getLogger(__name__)

MONOTONICITY_TOLERANCE = 1e-9
SANDWICH_SHRINK = 0.5


def bound_reports(
    records: Sequence[StudyRecord], regime: Regime, tol: float = SIGN_TOLERANCE
) -> list[BoundReport]:
    """Run the sign law and envelope fit once per mode over the successful records."""
    ok = [r for r in records if r.ok]
    if not ok:
        return []
    family = BoundFamily(regime.value)
    reports = []
    for mode in range(len(ok[0].modes)):
        samples = [
            BoundSample(
                family=family,
                mode=mode,
                epsilon=r.epsilon,
                eta=r.eta,
                mu=r.mu or 0.0,
                difference=r.modes[mode].raw_err,
                sigma=r.sigma or 0.0,
                eta0=r.eta0 or 1.0,
            )
            for r in ok
        ]
        reports.append(two_sided_check(samples, tol))
    return reports


def remainder_fits(records: Sequence[StudyRecord]) -> dict[str, RateFit]:
    """Log-log fits of |raw error| and the normalized remainder against eps, per mode.

    Modes with fewer than three positive values are skipped.
    """
    ok = [r for r in records if r.ok]
    fits: dict[str, RateFit] = {}
    if not ok:
        return fits
    for mode in range(len(ok[0].modes)):
        for key, values in (
            ("raw_err", [abs(r.modes[mode].raw_err) for r in ok]),
            ("norm_remainder", [r.modes[mode].norm_remainder for r in ok]),
        ):
            pairs = [(r.epsilon, v) for r, v in zip(ok, values, strict=True) if v > 0]
            if len(pairs) < MIN_POINTS:
                continue
            eps, ys = zip(*pairs, strict=True)
            fits[f"mode_{mode + 1}_{key}"] = fit_rate(eps, ys)
    return fits


def check_monotonicity(
    curve: BoundaryCurve,
    chain: Sequence[AlternationConfig],
    h: float,
    n_min: int = 4,
    k: int = 3,
    tol: float = MONOTONICITY_TOLERANCE,
) -> MonotonicityReport:
    """Eigenvalues along Neumann, each configuration of a nested chain, then Dirichlet.

    One triangulation carries the endpoints of every configuration, so the
    discrete spaces are nested and the eigenvalues cannot decrease.

    Args:
        curve: Boundary curve
        chain: Configurations ordered so each contains the previous one
        h: Target edge length
        n_min: Minimum edges per arc
        k: Number of eigenvalues compared
        tol: Allowed decrease

    Returns:
        Report with the largest decrease between consecutive entries

    Raises:
        ConfigurationError: If the chain is empty or not nested
    """
    if not chain:
        raise ConfigurationError("Monotonicity check needs at least one configuration")
    for i, (inner, outer) in enumerate(zip(chain, chain[1:], strict=False)):
        if not contains(inner, outer):
            raise ConfigurationError(f"Configurations {i} and {i + 1} are not nested")

    mesh = triangulate(curve, None, h, n_min, companions=chain)
    tagged = (
        [with_uniform_tag(mesh, BoundaryTag.NEUMANN)]
        + [retag(mesh, cfg) for cfg in chain]
        + [with_uniform_tag(mesh, BoundaryTag.DIRICHLET)]
    )
    labels = ["neumann"] + [f"{cfg.rule} #{i}" for i, cfg in enumerate(chain)] + ["dirichlet"]
    eigenvalues = np.array([solve_eigs(assemble(m), k).eigenvalues for m in tagged])
    decrease = float(np.max(eigenvalues[:-1] - eigenvalues[1:], initial=0.0))

    report = MonotonicityReport(
        labels=labels,
        eigenvalues=eigenvalues.tolist(),
        max_decrease=max(decrease, 0.0),
        tolerance=tol,
    )
    logger.info(f"Monotonicity over {len(labels)} sets: max decrease {report.max_decrease:.3e}")
    return report


def dirichlet_sandwich(
    curve: BoundaryCurve,
    theta_map: ThetaMap,
    outer: AlternationConfig,
    h: float,
    n_min: int = 4,
    k: int = 3,
) -> MonotonicityReport:
    """Compare `outer` with an inner family of equal theta-image arcs it contains.

    The inner arcs have half the smallest image half-length of `outer`, so the
    chain Neumann <= inner <= outer <= Dirichlet must hold.
    """
    q = arc_quantities(outer, theta_map)
    idx = outer.nonempty
    if not len(idx):
        raise ConfigurationError("Sandwich check needs a configuration with nonempty arcs")
    half = min(float(np.min(q.a_img[idx])), float(np.min(q.b_img[idx])))
    rule = ImageUniformRule(d=SANDWICH_SHRINK * half / outer.eta, fraction=0.5)
    inner = generate_alternation(
        theta_map, outer.n_arcs, rule, outer.eta, outer.robin_A, outer.anchor
    )
    return check_monotonicity(curve, [inner, outer], h, n_min, k)


def mu_slope_check(
    mesh: Mesh,
    theta_map: ThetaMap,
    robin_A: float,
    mus: Sequence[float],
    mode: int = 0,
    tol: float = 1e-3,
) -> SlopeReport:
    """Finite-difference d Lambda / d mu of the shifted Robin problem at mu = 0.

    Central differences over a symmetric step set are Richardson-extrapolated
    and compared with the boundary integral of psi_0^2 theta'_0. Negative
    weights A + mu < 0 are allowed.

    Args:
        mesh: Triangulation (tags are replaced)
        theta_map: Theta map supplying the Robin weight
        robin_A: Limit coefficient A
        mus: Steps containing both h and -h for every h, at least two positive
        mode: Mode index
        tol: Allowed slope discrepancy

    Returns:
        Slope report with central slopes ordered by decreasing step

    Raises:
        ConfigurationError: For a non-symmetric step set or a cluster that
            changes size between steps
    """
    steps = sorted({float(m) for m in mus if m > 0}, reverse=True)
    negatives = {float(m) for m in mus if m < 0}
    if len(steps) < 2 or negatives != {-s for s in steps}:
        raise ConfigurationError(
            f"mu-slope check needs a symmetric step set with at least two positive steps, "
            f"got {list(mus)}"
        )
    k = mode + 3
    match = get_settings().match_tolerance

    def solve(mu: float) -> tuple[float, int]:
        spec = solve_limit(LimitProblem.shifted_robin(robin_A, mu), mesh, theta_map, k)
        return float(spec.eigenvalues[mode]), len(spec.regroup(match).cluster_of(mode))

    grid = sorted([-s for s in steps] + [0.0] + steps)
    solved = {mu: solve(mu) for mu in grid}
    if len({size for _, size in solved.values()}) > 1:
        raise ConfigurationError(f"Cluster of mode {mode} changes size across the mu steps")
    value = {mu: v for mu, (v, _) in solved.items()}

    central = [(value[s] - value[-s]) / (2 * s) for s in steps]
    ratio = steps[-2] / steps[-1]
    extrapolated = central[-1] + (central[-1] - central[-2]) / (ratio**2 - 1)

    limit = LimitProblem.robin(robin_A) if robin_A > 0 else LimitProblem.neumann()
    base = orthogonalize_clusters(
        solve_limit(limit, mesh, theta_map, k), theta_map.limit_theta_prime
    )
    analytic = robin_first_order(base, theta_map, mode)

    remainder = [abs(0.5 * (value[s] + value[-s]) - value[0.0]) for s in steps]
    fit = None
    if len(steps) >= MIN_POINTS and all(r > 0 for r in remainder):
        fit = fit_rate(steps, remainder)

    report = SlopeReport(
        mode=mode,
        robin_A=robin_A,
        mus=grid,
        values=[value[mu] for mu in grid],
        central_slopes=central,
        extrapolated_slope=extrapolated,
        analytic_slope=analytic,
        tolerance=tol,
        remainder_fit=fit,
    )
    logger.info(
        f"mu-slope mode {mode}: extrapolated {extrapolated:.8g}, "
        f"integral {analytic:.8g}, gap {report.discrepancy:.3e}"
    )
    return report

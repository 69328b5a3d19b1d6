"""Two-sided eigenvalue bounds: sign laws and fitted envelopes over a sweep."""

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.optimize import nnls

from app.errors import ConfigurationError

from .models import BoundFamily, BoundReport, BoundSample, EnvelopeFit

logger = logging.getLogger(__name__)

SIGN_TOLERANCE = 1e-8


def _dirichlet_lower_terms(x: BoundSample) -> dict[str, float]:
    return {
        "eps|ln sin eta|": x.epsilon * abs(math.log(math.sin(x.eta))),
        "|eps ln eta|^1.5 (pi/2 - eta)": abs(x.epsilon * math.log(x.eta)) ** 1.5
        * (math.pi / 2 - x.eta),
    }


def _neumann_upper_terms(x: BoundSample) -> dict[str, float]:
    return {"mu": x.mu}


def _robin_upper_terms(x: BoundSample) -> dict[str, float]:
    return {"mu": x.mu, "eps^1.5": x.epsilon**1.5, "sigma": x.sigma}


def _robin_lower_terms(x: BoundSample) -> dict[str, float]:
    return {
        "-mu": -x.mu,
        "-eps ln eta0": -x.epsilon * math.log(x.eta0),
        "eps": x.epsilon,
        "sigma": x.sigma,
    }


def fit_envelope(
    terms: Sequence[dict[str, float]], targets: np.ndarray, tol: float = SIGN_TOLERANCE
) -> EnvelopeFit:
    """Fit target <= sum C_i term_i with C_i >= 0 over a batch.

    Constants come from a non-negative least-squares fit scaled up until the
    envelope covers every sample. Stability is the max/min ratio of
    target to fitted envelope over samples where both are positive.
    """
    names = list(terms[0])
    features = np.array([[row[name] for name in names] for row in terms], dtype=float)
    coeffs, residual = nnls(features, targets)
    envelope = features @ coeffs
    usable = (envelope > 0) & (targets > tol)
    ratios = targets[usable] / envelope[usable]
    scale = max(1.0, float(np.max(ratios))) if ratios.size else 1.0
    stability = float(np.max(ratios) / np.min(ratios)) if ratios.size > 1 else 1.0
    return EnvelopeFit(
        terms=names,
        constants=[float(c) for c in coeffs * scale],
        residual=float(residual),
        stability=stability,
    )


def two_sided_check(samples: Sequence[BoundSample], tol: float = SIGN_TOLERANCE) -> BoundReport:
    """Check the sign law and fit the bounding envelopes for one mode over a sweep.

    Dirichlet limit: difference <= 0, with a lower envelope in eps ln sin eta.
    Neumann limit: difference >= 0, with an upper envelope C mu.
    Robin limit: no sign law; upper (mu, eps^1.5, sigma) and lower
    (mu, eps ln eta0, eps, sigma) envelopes.

    Args:
        samples: Sweep points sharing one family and one mode
        tol: Allowed sign violation

    Returns:
        Report with the largest sign violation and fitted envelopes

    Raises:
        ConfigurationError: For an empty batch or mixed families or modes
    """
    if not samples:
        raise ConfigurationError("Bound check needs at least one sample")
    families = {x.family for x in samples}
    modes = {x.mode for x in samples}
    if len(families) > 1 or len(modes) > 1:
        raise ConfigurationError(
            f"Bound check batch mixes families {sorted(f.value for f in families)} "
            f"or modes {sorted(modes)}"
        )
    family = samples[0].family
    difference = np.array([x.difference for x in samples])
    report = BoundReport(family=family, mode=samples[0].mode, n_samples=len(samples), tolerance=tol)

    if family == BoundFamily.DIRICHLET_LIMIT:
        report.sign_violation = float(np.max(difference))
        report.lower = fit_envelope([_dirichlet_lower_terms(x) for x in samples], -difference, tol)
    elif family == BoundFamily.NEUMANN_LIMIT:
        report.sign_violation = float(np.max(-difference))
        report.upper = fit_envelope([_neumann_upper_terms(x) for x in samples], difference, tol)
    else:
        report.upper = fit_envelope([_robin_upper_terms(x) for x in samples], difference, tol)
        report.lower = fit_envelope([_robin_lower_terms(x) for x in samples], -difference, tol)

    logger.info(
        f"Bound check {family.value} mode {report.mode}: sign violation "
        f"{report.sign_violation}, passed={report.passed}"
    )
    return report

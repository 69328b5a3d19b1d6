"""Convergence-rate fits on log-log data."""

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.stats import linregress

from app.errors import ConfigurationError, NumericalError

from .models import RateFit

logger = logging.getLogger(__name__)

MIN_POINTS = 3


def fit_rate(xs: Sequence[float], ys: Sequence[float]) -> RateFit:
    """Fit ln y = slope * ln x + intercept by least squares.

    Args:
        xs: Positive abscissae (e.g. eps or h)
        ys: Positive errors or remainders

    Returns:
        Fit with R^2 and consecutive ratios ys[i+1] / ys[i]

    Raises:
        ConfigurationError: For fewer than 3 points, mismatched lengths or
            non-positive data
        NumericalError: If the fitted slope is not finite
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.size < MIN_POINTS:
        raise ConfigurationError(
            f"Rate fit needs at least {MIN_POINTS} paired points, got {x.size} and {y.size}"
        )
    if np.any(x <= 0) or np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise ConfigurationError("Rate fit needs positive finite data")

    result = linregress(np.log(x), np.log(y))
    if not math.isfinite(result.slope):
        raise NumericalError("Rate fit produced a non-finite slope")
    fit = RateFit(
        slope=float(result.slope),
        intercept=float(result.intercept),
        r_squared=float(result.rvalue**2),
        ratios=[float(r) for r in y[1:] / y[:-1]],
    )
    logger.debug(f"Rate fit over {x.size} points: slope {fit.slope:.4f}, R^2 {fit.r_squared:.4f}")
    return fit

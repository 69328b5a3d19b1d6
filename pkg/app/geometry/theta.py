"""Reparametrizations theta_eps of the boundary onto the unit circle."""

import logging
import math
from collections.abc import Sequence

import numpy as np

from app.errors import GeometryError

from .models import BoundaryCurve, ThetaKind, ThetaMap

logger = logging.getLogger(__name__)

BOUND_SAMPLES = 10_000


def _bounds_and_sigma(theta_prime, limit_theta_prime, total_length: float) -> tuple:
    s = np.linspace(0.0, total_length, BOUND_SAMPLES, endpoint=False)
    values = theta_prime(s)
    sigma = float(np.max(np.abs(values - limit_theta_prime(s))))
    return (float(np.min(values)), float(np.max(values))), sigma


def build_theta_map(
    kind: ThetaKind | str,
    curve: BoundaryCurve,
    epsilon: float,
    coefficients: Sequence[float] = (),
    phases: Sequence[float] = (),
    rate: float | None = None,
) -> ThetaMap:
    """Build a theta map for the given curve.

    The limit map is theta_0(s) = 2 pi s / S. The perturbed family adds
    rate * G(s) where G' = g is the zero-mean series sum_m c_m cos(2 pi m s / S + phi_m).

    Args:
        kind: identity or perturbed
        curve: Boundary curve
        epsilon: Small parameter 2/N
        coefficients: Amplitudes c_m of the perturbation, m = 1, 2, ...
        phases: Phases phi_m (zero when omitted)
        rate: Perturbation rate, defaults to epsilon

    Returns:
        Theta map with sampled bounds (c1, c2) and sigma = sup|theta'_eps - theta'_0|

    Raises:
        GeometryError: If the perturbation can break monotonicity
    """
    kind = ThetaKind(kind)
    S = curve.total_length
    base_rate = 2.0 * math.pi / S

    def limit_theta_prime(s):
        return np.full(np.shape(s), base_rate)

    if kind == ThetaKind.IDENTITY:

        def theta(s):
            return base_rate * np.asarray(s, dtype=float)

        theta_prime = limit_theta_prime

    elif kind == ThetaKind.PERTURBED:
        amps = np.asarray(coefficients, dtype=float)
        if amps.size == 0:
            raise GeometryError("Perturbed theta map needs at least one coefficient")
        phis = np.zeros_like(amps)
        phis[: len(phases)] = np.asarray(phases, dtype=float)[: amps.size]
        orders = np.arange(1, amps.size + 1)
        scale = epsilon if rate is None else rate

        # Monotonicity is certified when sup|rate * g| < min(theta'_0) / 2.
        if scale * np.sum(np.abs(amps)) >= base_rate / 2:
            raise GeometryError(
                f"Perturbation rate {scale:.4g} with amplitudes {amps.tolist()} "
                f"breaks monotonicity of theta (needs sup|rate*g| < {base_rate / 2:.4g})"
            )

        def g(s):
            phase = 2.0 * math.pi * np.multiply.outer(np.asarray(s, dtype=float), orders) / S
            return np.sum(amps * np.cos(phase + phis), axis=-1)

        def big_g(s):
            phase = 2.0 * math.pi * np.multiply.outer(np.asarray(s, dtype=float), orders) / S
            weights = amps * S / (2.0 * math.pi * orders)
            return np.sum(weights * (np.sin(phase + phis) - np.sin(phis)), axis=-1)

        def theta(s):
            s = np.asarray(s, dtype=float)
            return base_rate * s + scale * big_g(s)

        def theta_prime(s):
            return base_rate + scale * g(s)

    else:
        raise GeometryError(f"Unknown theta map kind: {kind}")

    bounds, sigma = _bounds_and_sigma(theta_prime, limit_theta_prime, S)
    if bounds[0] <= 0:
        raise GeometryError(f"Theta map is not strictly increasing: min theta' = {bounds[0]}")

    logger.debug(f"Built {kind.value} theta map: bounds={bounds}, sigma={sigma:.3e}")
    return ThetaMap(
        kind=kind,
        total_length=S,
        epsilon=epsilon,
        theta=theta,
        theta_prime=theta_prime,
        limit_theta_prime=limit_theta_prime,
        bounds=bounds,
        sigma=sigma,
    )

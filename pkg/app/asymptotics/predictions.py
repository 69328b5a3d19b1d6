"""Explicit eigenvalue corrections for the Robin, Neumann and Dirichlet limits."""

import logging
import math

import numpy as np

from app.config import get_settings
from app.errors import ConfigurationError, GeometryError
from app.fem import Spectrum, boundary_trace_integral, normal_derivative_integral
from app.geometry import AlternationConfig, ArcQuantities, SmallParams, ThetaMap, profile_f

from .models import Prediction, PredictionKind

logger = logging.getLogger(__name__)


def _log_profile_weight(theta_map: ThetaMap, cfg: AlternationConfig, q: ArcQuantities):
    """s -> ln f(theta_eps(s)) theta'_eps(s)."""

    def weight(s):
        f = np.asarray(profile_f(q, cfg, theta_map.theta(s)))
        if np.any(f <= 0):
            raise GeometryError(
                f"Profile f must stay positive on the boundary, minimum {float(np.min(f)):.3e}"
            )
        return np.log(f) * theta_map.theta_prime(s)

    return weight


def lambda1_two_term(
    spec: Spectrum,
    theta_map: ThetaMap,
    cfg: AlternationConfig,
    q: ArcQuantities,
    mode: int,
    coupling: float,
    order: int | None = None,
) -> float:
    """Second coefficient (A + mu)^2 * integral of Psi^2 ln f(theta_eps) theta'_eps ds.

    Args:
        spec: Spectrum of the shifted Robin problem with weight (A + mu) theta'_eps,
            rotated within clusters against theta'_eps
        theta_map: Map the configuration was generated with
        cfg: Alternation configuration
        q: Arc quantities of `cfg`
        mode: Mode index
        coupling: A + mu
        order: Gauss points per edge (layer order by default, ln f varies fast)

    Returns:
        The coefficient, non-positive because f <= 1

    Raises:
        GeometryError: If f is not positive at some quadrature node
    """
    order = order or get_settings().layer_quadrature_order
    integral = boundary_trace_integral(spec, _log_profile_weight(theta_map, cfg, q), mode, order)
    return coupling**2 * integral


def two_term_prediction(
    spec: Spectrum,
    theta_map: ThetaMap,
    cfg: AlternationConfig,
    q: ArcQuantities,
    mode: int,
    params: SmallParams,
) -> Prediction:
    """Lambda_0 + eps Lambda_1 for the shifted Robin problem."""
    coefficient = lambda1_two_term(spec, theta_map, cfg, q, mode, params.coupling)
    if coefficient > 0:
        logger.warning(f"Two-term coefficient for mode {mode} is positive: {coefficient:.3e}")
    return Prediction(
        kind=PredictionKind.TWO_TERM,
        mode=mode,
        base=float(spec.eigenvalues[mode]),
        coefficient=coefficient,
        correction=params.epsilon * coefficient,
        epsilon=params.epsilon,
        eta=params.eta,
        mu=params.mu,
        robin_A=params.robin_A,
    )


def robin_first_order(spec: Spectrum, theta_map: ThetaMap, mode: int) -> float:
    """Slope in mu: integral of psi_0^2 theta'_0 ds over the boundary.

    The spectrum is the Robin(A) limit (Neumann for A = 0), rotated within
    clusters against theta'_0.
    """
    return boundary_trace_integral(spec, theta_map.limit_theta_prime, mode)


def first_order_prediction(
    spec: Spectrum, theta_map: ThetaMap, mode: int, params: SmallParams
) -> Prediction:
    """lambda_0 + mu * slope."""
    slope = robin_first_order(spec, theta_map, mode)
    return Prediction(
        kind=PredictionKind.FIRST_ORDER,
        mode=mode,
        base=float(spec.eigenvalues[mode]),
        coefficient=slope,
        correction=params.mu * slope,
        epsilon=params.epsilon,
        eta=params.eta,
        mu=params.mu,
        robin_A=params.robin_A,
    )


def _check_eta(eta: float) -> None:
    if not 0.0 < eta <= math.pi / 2:
        raise ConfigurationError(f"Dirichlet correction needs eta in (0, pi/2], got {eta}")


def dirichlet_correction(spec: Spectrum, theta_map: ThetaMap, eta: float, mode: int) -> float:
    """Coefficient integral of (d psi_0/d nu)^2 / theta'_eps ds of the Dirichlet limit.

    Raises:
        ConfigurationError: If eta is outside (0, pi/2] or the spectrum is not
            Dirichlet on the whole boundary
    """
    _check_eta(eta)
    return normal_derivative_integral(spec, lambda s: 1.0 / theta_map.theta_prime(s), mode)


def dirichlet_prediction(
    spec: Spectrum, theta_map: ThetaMap, eta: float, mode: int, epsilon: float
) -> Prediction:
    """lambda_0 + eps ln sin(eta) * coefficient; equals lambda_0 at eta = pi/2."""
    coefficient = dirichlet_correction(spec, theta_map, eta, mode)
    return Prediction(
        kind=PredictionKind.DIRICHLET_CORRECTION,
        mode=mode,
        base=float(spec.eigenvalues[mode]),
        coefficient=coefficient,
        correction=epsilon * math.log(math.sin(eta)) * coefficient,
        epsilon=epsilon,
        eta=eta,
    )

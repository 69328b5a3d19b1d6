"""Scalar quantities consumed by the asymptotic formulas."""

import csv
import logging
import math
from pathlib import Path

import numpy as np

from app.errors import ConfigurationError, GeometryError

from .models import AlternationConfig, ArcQuantities, SmallParams, ThetaMap

logger = logging.getLogger(__name__)


def _psi(u: np.ndarray) -> np.ndarray:
    positive = u > 0
    safe = np.where(positive, u, 1.0)
    return np.where(positive, np.exp(-1.0 / safe), 0.0)


def cutoff_chi(t: np.ndarray | float) -> np.ndarray | float:
    """Smooth cutoff: 1 for t <= 1/4, 0 for t >= 3/4, chi(t) + chi(1 - t) = 1.

    Built from psi(u) = exp(-1/u) as chi(t) = phi(2 (3/4 - t)) with
    phi(u) = psi(u) / (psi(u) + psi(1 - u)).
    """
    u = 2.0 * (0.75 - np.asarray(t, dtype=float))
    num = _psi(u)
    value = num / (num + _psi(1.0 - u))
    return float(value) if value.ndim == 0 else value


def arc_quantities(cfg: AlternationConfig, theta_map: ThetaMap) -> ArcQuantities:
    """Compute d_j, the theta-image lengths d^j, alpha^j, beta^j and their differences.

    Args:
        cfg: Alternation configuration
        theta_map: Theta map the configuration was generated with

    Returns:
        Arc quantities with cyclic differences delta_j = d_{j+1} - d_j
    """
    eps = cfg.epsilon
    two_eta = 2.0 * cfg.eta
    centre = theta_map.extended(cfg.anchors)
    a_img = (centre - theta_map.extended(cfg.starts)) / eps
    b_img = (theta_map.extended(cfg.ends) - centre) / eps
    d = (cfg.a + cfg.b) / two_eta
    alpha_img = a_img / two_eta
    beta_img = b_img / two_eta
    d_img = alpha_img + beta_img

    theta0 = float(theta_map.extended(cfg.anchor))
    lattice = theta0 + eps * math.pi * np.arange(cfg.n_arcs)

    return ArcQuantities(
        d=d,
        d_img=d_img,
        alpha_img=alpha_img,
        beta_img=beta_img,
        a_img=a_img,
        b_img=b_img,
        delta=np.roll(d, -1) - d,
        delta_img=np.roll(d_img, -1) - d_img,
        lattice=lattice,
    )


def profile_f(q: ArcQuantities, cfg: AlternationConfig, theta: np.ndarray | float):
    """Evaluate f(theta) = d^{j+1} - chi((theta - theta(s_j)) / (eps pi)) delta^j.

    theta is reduced modulo 2 pi into the cell j with
    eps pi j <= theta - theta(s_0) < eps pi (j + 1).
    """
    eps_pi = cfg.epsilon * math.pi
    theta = np.asarray(theta, dtype=float)
    offset = np.mod(theta - q.lattice[0], 2.0 * math.pi)
    j = np.minimum(np.floor(offset / eps_pi).astype(int), cfg.n_arcs - 1)
    local = (offset - eps_pi * j) / eps_pi
    nxt = (j + 1) % cfg.n_arcs
    value = q.d_img[nxt] - cutoff_chi(local) * q.delta_img[j]
    return float(value) if np.ndim(value) == 0 else value


def small_params(n_arcs: int, eta: float, robin_A: float = 0.0, sigma: float = 0.0) -> SmallParams:
    """Derive mu = -(eps ln eta)^-1 - A from (N, eta, A).

    Raises:
        ConfigurationError: If N is odd or eta is outside (0, 1)
    """
    if n_arcs <= 0 or n_arcs % 2:
        raise ConfigurationError(f"N must be a positive even integer, got {n_arcs}")
    if not 0.0 < eta < 1.0:
        raise ConfigurationError(f"eta must lie in (0, 1) for a finite mu, got {eta}")
    eps = 2.0 / n_arcs
    mu = -1.0 / (eps * math.log(eta)) - robin_A
    return SmallParams(epsilon=eps, eta=eta, mu=mu, robin_A=robin_A, sigma=sigma)


def eta_from_mu(epsilon: float, robin_A: float, mu: float) -> float:
    """Invert the relation: eta = exp(-1 / (eps (A + mu))).

    Raises:
        ConfigurationError: If A + mu is not positive
    """
    coupling = robin_A + mu
    if not coupling > 0:
        raise ConfigurationError(f"A + mu must be positive to derive eta, got {coupling}")
    return math.exp(-1.0 / (epsilon * coupling))


def eta0(cfg: AlternationConfig, theta_map: ThetaMap) -> float:
    """Largest eta0 <= 1 with 2 eta0 eta / c1 <= a_j + b_j for every arc."""
    c1 = theta_map.bounds[0]
    return min(1.0, c1 * float(np.min(cfg.a + cfg.b)) / (2.0 * cfg.eta))


def arc_image_ratio(q: ArcQuantities, epsilon: float) -> float:
    """delta^* / (delta_* + eps), bounded uniformly for admissible configurations."""
    return q.delta_img_star / (q.delta_star + epsilon)


def check_profile_bounds(q: ArcQuantities, cfg: AlternationConfig, c1: float, c3: float) -> None:
    """Verify c1 c3 / 2 <= f <= 1 on a dense theta grid.

    Raises:
        GeometryError: If a sampled value leaves the band
    """
    grid = np.linspace(0.0, 2.0 * math.pi, 64 * cfg.n_arcs, endpoint=False)
    values = profile_f(q, cfg, grid)
    low, high = float(np.min(values)), float(np.max(values))
    if low < c1 * c3 / 2.0 - 1e-12 or high > 1.0 + 1e-12:
        raise GeometryError(
            f"Profile f leaves [{c1 * c3 / 2:.4g}, 1]: range [{low:.6g}, {high:.6g}]"
        )


def write_arc_table(cfg: AlternationConfig, q: ArcQuantities, path: Path) -> Path:
    """Dump (s_j, a_j, b_j, d_j, delta_j, d^j, delta^j) as CSV."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["j", "s_j", "a_j", "b_j", "d_j", "delta_j", "d_img_j", "delta_img_j"])
        for j in range(cfg.n_arcs):
            writer.writerow(
                [j]
                + [
                    f"{v:.12e}"
                    for v in (
                        cfg.anchors[j],
                        cfg.a[j],
                        cfg.b[j],
                        q.d[j],
                        q.delta[j],
                        q.d_img[j],
                        q.delta_img[j],
                    )
                ]
            )
    logger.info(f"Wrote arc table with {cfg.n_arcs} rows to {path}")
    return path

"""Quadrature checks of the X_eta cell identities."""

import csv
import logging
import math
from collections.abc import Callable, Iterable
from pathlib import Path

from scipy.integrate import quad
from tqdm import tqdm

from app.config import get_settings
from app.errors import ConfigurationError, NumericalError

from .cells import eval_X_eta, eval_X_eta_gradient
from .models import CellIntegrals

logger = logging.getLogger(__name__)

DEFAULT_QUAD_TOL = 1e-10
CELL_HEIGHT = 20.0
QUAD_LIMIT = 200


def _integrate(f: Callable[[float], float], a: float, b: float, tol: float, what: str) -> float:
    """Adaptive quadrature; fails only when scipy flags trouble and the error is large."""
    result = quad(f, a, b, epsabs=tol, epsrel=tol, limit=QUAD_LIMIT, full_output=1)
    value, error = result[0], result[1]
    if len(result) > 3 and error > 100 * tol:
        raise NumericalError(
            f"Quadrature of {what} did not converge (error {error:.2e}): {result[3]}",
            estimate=value,
        )
    return value


def _grad_sq(xi1: float, xi2: float, eta: float) -> float:
    g1, g2 = eval_X_eta_gradient(xi1, xi2, eta)
    return g1 * g1 + g2 * g2


def _flux(eta: float, tol: float) -> float:
    """Integral of d X_eta / d xi2 over the arc (-eta, eta), with xi1 = eta sin t."""

    def integrand(t):
        xi1 = eta * math.sin(t)
        # sin^2 eta - sin^2 xi1 = sin(eta - xi1) sin(eta + xi1)
        # eta - xi1 = eta cos^2 t / (1 + sin t)
        gap = math.sin(eta * math.cos(t) ** 2 / (1.0 + math.sin(t))) * math.sin(eta + xi1)
        return eta * math.cos(t) * (math.cos(xi1) / math.sqrt(gap) - 1.0)

    return 2.0 * _integrate(integrand, 0.0, math.pi / 2, tol, "the arc flux")


def _trace(eta: float, tol: float) -> float:
    """Integral of X_eta over the Neumann part eta < |xi1| < pi/2 of the cell."""
    return 2.0 * _integrate(
        lambda xi1: eval_X_eta(xi1, 0.0, eta), eta, math.pi / 2, tol, "the Neumann trace"
    )


def _grad_norm_sq(eta: float, tol: float) -> float:
    """Dirichlet energy over the cell, doubled from the half cell (0, pi/2) x (0, 20).

    A half-disk of radius R around the endpoint (eta, 0) is integrated in polar
    coordinates with rho = r^2, which absorbs the 1/rho blow-up of |grad X_eta|^2.
    """
    radius = 0.5 * min(eta, math.pi / 2 - eta)

    def polar(phi):
        def inner(r):
            rho = r * r
            return 2.0 * r**3 * _grad_sq(eta + rho * math.cos(phi), rho * math.sin(phi), eta)

        return _integrate(inner, 0.0, math.sqrt(radius), tol, "the endpoint disk")

    total = _integrate(polar, 0.0, math.pi, tol, "the endpoint disk")

    def column(xi1, lower):
        return _integrate(
            lambda xi2: _grad_sq(xi1, xi2, eta), lower, CELL_HEIGHT, tol, "a cell column"
        )

    total += _integrate(lambda x: column(x, 0.0), 0.0, eta - radius, tol, "the cell")
    total += _integrate(
        lambda x: column(x, math.sqrt(max(radius**2 - (x - eta) ** 2, 0.0))),
        eta - radius,
        eta + radius,
        tol,
        "the cell",
    )
    total += _integrate(lambda x: column(x, 0.0), eta + radius, math.pi / 2, tol, "the cell")
    return 2.0 * total


def cell_integrals(eta: float, quad_tol: float = DEFAULT_QUAD_TOL) -> CellIntegrals:
    """Compute the flux, trace and energy integrals of X_eta over one period cell.

    Args:
        eta: Half-width of the rescaled Dirichlet arc, in (0, pi/2)
        quad_tol: Absolute and relative quadrature tolerance

    Returns:
        Computed values; closed forms are properties of the result

    Raises:
        ConfigurationError: If eta is outside (0, pi/2)
        NumericalError: If a quadrature fails to reach 100 x quad_tol
    """
    if not 0.0 < eta < math.pi / 2:
        raise ConfigurationError(f"Cell integrals need eta in (0, pi/2), got {eta}")
    result = CellIntegrals(
        eta=eta,
        flux=_flux(eta, quad_tol),
        trace=_trace(eta, quad_tol),
        grad_norm=math.sqrt(_grad_norm_sq(eta, quad_tol)),
    )
    logger.debug(f"Cell integrals eta={eta:.4g}: max deviation {result.max_deviation:.2e}")
    return result


def tabulate_cell_integrals(
    etas: Iterable[float], quad_tol: float = DEFAULT_QUAD_TOL
) -> list[CellIntegrals]:
    """Evaluate `cell_integrals` over a list of eta values."""
    etas = list(etas)
    return [
        cell_integrals(eta, quad_tol)
        for eta in tqdm(
            etas,
            desc="🧮 Cell integrals",
            ncols=100,
            disable=not get_settings().show_progress or len(etas) < 2,
        )
    ]


def write_cell_table(rows: Iterable[CellIntegrals], path: Path) -> Path:
    """Write (eta, I_flux, I_trace, grad_norm) rows."""
    rows = list(rows)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["eta", "I_flux", "I_trace", "grad_norm"])
        for row in rows:
            writer.writerow([f"{v:.12e}" for v in (row.eta, row.flux, row.trace, row.grad_norm)])
    logger.info(f"Wrote {len(rows)} cell integral rows to {path}")
    return path


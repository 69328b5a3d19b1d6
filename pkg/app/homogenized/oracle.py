"""Bessel-root eigenvalues and mode integrals for the unit disk, where theta'_0 = 1."""

import csv
import logging
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import jn_zeros, jnp_zeros, jv, jvp

from app.errors import ConfigurationError

from .models import DiskOracle, LimitKind, LimitProblem, OracleMode

logger = logging.getLogger(__name__)

MAX_ORACLE_COUNT = 50


def _neumann_roots(n: int, count: int) -> np.ndarray:
    """Zeros of J_n', with the zero root of J_0' leading for n = 0."""
    if n == 0:
        return np.concatenate([[0.0], jnp_zeros(0, count - 1)]) if count > 1 else np.zeros(1)
    return jnp_zeros(n, count)


def _robin_roots(n: int, count: int, coupling: float) -> np.ndarray:
    """Roots of x J_n'(x) + c J_n(x), bracketed between Neumann and Dirichlet roots."""
    lower = _neumann_roots(n, count)
    upper = jn_zeros(n, count)

    def f(x):
        return x * jvp(n, x) + coupling * jv(n, x)

    roots = [
        brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)
        for lo, hi in zip(lower, upper, strict=True)
    ]
    return np.array(roots)


def disk_roots(problem: LimitProblem, n: int, count: int) -> np.ndarray:
    """First `count` radial roots x_{n,m} for angular order n.

    Raises:
        ConfigurationError: For a negative Robin coupling, which has no bracketing rule
    """
    coupling = problem.coupling
    if problem.kind == LimitKind.DIRICHLET:
        return jn_zeros(n, count)
    if coupling == 0.0:
        return _neumann_roots(n, count)
    if coupling < 0:
        raise ConfigurationError(f"Disk oracle needs a non-negative Robin coupling, got {coupling}")
    return _robin_roots(n, count, coupling)


@lru_cache(maxsize=32)
def disk_oracle(problem: LimitProblem, count: int) -> DiskOracle:
    """Lowest `count` disk eigenvalues of a limit problem, counting multiplicity.

    Args:
        problem: Limit problem (Robin couplings apply to theta'_0 = 1)
        count: Number of eigenvalues, at most 50

    Returns:
        Oracle with separated modes sorted ascending

    Raises:
        ConfigurationError: If count is outside [1, 50]
    """
    if not 1 <= count <= MAX_ORACLE_COUNT:
        raise ConfigurationError(f"Oracle count must lie in [1, {MAX_ORACLE_COUNT}], got {count}")
    n_max = count // 2 + 1
    m_max = count // 2 + 2
    modes = []
    for n in range(n_max + 1):
        for m, root in enumerate(disk_roots(problem, n, m_max), start=1):
            modes.append(
                OracleMode(
                    n=n,
                    m=m,
                    root=float(root),
                    eigenvalue=float(root**2),
                    multiplicity=1 if n == 0 else 2,
                )
            )
    modes.sort(key=lambda mode: (mode.eigenvalue, mode.n))
    kept, total = [], 0
    for mode in modes:
        if total >= count:
            break
        kept.append(mode)
        total += mode.multiplicity
    logger.debug(f"Disk oracle {problem.label}: {len(kept)} separated modes for {count} values")
    return DiskOracle(problem=problem, modes=tuple(kept), count=count)


def _radial_norm(n: int, root: float) -> float:
    """Integral of J_n(x r)^2 r over [0, 1]."""
    value, _ = quad(lambda r: jv(n, root * r) ** 2 * r, 0.0, 1.0, epsabs=1e-14, epsrel=1e-12)
    return value


def disk_mode_boundary_mass(problem: LimitProblem, n: int, m: int) -> float:
    """Boundary integral of psi^2 for the L2(disk)-normalized mode (n, m).

    The angular factor cancels between the boundary and area integrals, so
    the value is J_n(x)^2 over the radial norm for either cos or sin modes.
    """
    root = float(disk_roots(problem, n, m)[m - 1])
    return float(jv(n, root) ** 2 / _radial_norm(n, root))


def disk_mode_flux(problem: LimitProblem, n: int, m: int) -> float:
    """Boundary integral of (d psi / d nu)^2 for the L2(disk)-normalized mode (n, m)."""
    root = float(disk_roots(problem, n, m)[m - 1])
    if root == 0.0:
        return 0.0
    return float(root**2 * jvp(n, root) ** 2 / _radial_norm(n, root))


def write_oracle_csv(oracle: DiskOracle, path: Path) -> Path:
    """Write (n, m, eigenvalue, multiplicity) rows."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["n", "m", "eigenvalue", "multiplicity"])
        for mode in oracle.modes:
            writer.writerow([mode.n, mode.m, f"{mode.eigenvalue:.12e}", mode.multiplicity])
    logger.info(f"Wrote {len(oracle.modes)} oracle modes to {path}")
    return path

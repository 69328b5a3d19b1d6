"""Boundary integrals of discrete eigenfunctions and spectrum exports."""

import csv
import logging
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from scipy.sparse.linalg import spsolve

from app.config import get_settings
from app.errors import ConfigurationError
from app.geometry.models import ArcMap
from app.mesh.quadrature import boundary_quadrature, trace_values

from .assembly import boundary_mass
from .models import Spectrum

logger = logging.getLogger(__name__)


def _modes(spec: Spectrum, modes: Sequence[int] | None) -> np.ndarray:
    selected = np.arange(spec.k) if modes is None else np.asarray(modes, dtype=int)
    if np.any(selected < 0) or np.any(selected >= spec.k):
        raise ConfigurationError(f"Mode indices {selected.tolist()} out of range for k={spec.k}")
    return selected


def _weights_at(g: ArcMap | None, s: np.ndarray) -> np.ndarray:
    if g is None:
        return np.ones_like(s)
    values = np.asarray(g(s), dtype=float).reshape(s.shape)
    if not np.all(np.isfinite(values)):
        raise ConfigurationError("Boundary weight g is not finite at some quadrature nodes")
    return values


def boundary_trace_gram(
    spec: Spectrum,
    g: ArcMap | None = None,
    modes: Sequence[int] | None = None,
    order: int | None = None,
) -> np.ndarray:
    """Gram matrix of boundary traces, G_ij = integral of u_i u_j g ds over the boundary.

    Args:
        spec: Spectrum whose eigenvectors are integrated
        g: Weight in arclength (1 when omitted)
        modes: Mode indices (all when omitted)
        order: Gauss points per edge (defaults to the configured order)

    Returns:
        Symmetric matrix of size len(modes)
    """
    mesh = spec.mesh
    quad = boundary_quadrature(mesh, order or get_settings().quadrature_order)
    traces = trace_values(mesh, quad, spec.eigenvectors[:, _modes(spec, modes)])
    weighted = traces * (quad.weights * _weights_at(g, quad.s))[:, None]
    return traces.T @ weighted


def boundary_trace_integral(
    spec: Spectrum, g: ArcMap | None, mode: int, order: int | None = None
) -> float:
    """Integral of (u_k)^2 g over the boundary by edge-wise Gauss quadrature of the P1 trace."""
    return float(boundary_trace_gram(spec, g, [mode], order)[0, 0])


def normal_fluxes(spec: Spectrum, modes: Sequence[int] | None = None) -> np.ndarray:
    """Nodal normal derivatives on the boundary by variational flux recovery.

    The weak residual K u - lambda M u restricted to boundary rows equals the
    boundary mass applied to du/dnu; that system is solved for each mode.

    Returns:
        Array of shape (n_boundary, len(modes))

    Raises:
        ConfigurationError: If some boundary vertex is not Dirichlet-constrained
    """
    ops = spec.operators
    mesh = spec.mesh
    if not np.all(np.isin(mesh.boundary_vertices, ops.dirichlet_dofs)):
        raise ConfigurationError(
            "Flux recovery needs the Dirichlet condition on the whole boundary"
        )
    selected = _modes(spec, modes)
    U = spec.eigenvectors[:, selected]
    residual = ops.K @ U - (ops.M @ U) * spec.eigenvalues[selected]
    boundary = mesh.boundary_vertices
    B = boundary_mass(mesh, None, np.arange(mesh.n_boundary))[boundary][:, boundary]
    rhs = residual[boundary]
    flux = spsolve(B.tocsc(), rhs)
    return np.asarray(flux).reshape(len(boundary), len(selected))


def normal_derivative_gram(
    spec: Spectrum,
    g: ArcMap | None = None,
    modes: Sequence[int] | None = None,
    order: int | None = None,
) -> np.ndarray:
    """Gram matrix of recovered fluxes, G_ij = integral of (du_i/dnu)(du_j/dnu) g ds."""
    mesh = spec.mesh
    flux = normal_fluxes(spec, modes)
    full = np.zeros((mesh.n_vertices, flux.shape[1]))
    full[mesh.boundary_vertices] = flux
    quad = boundary_quadrature(mesh, order or get_settings().quadrature_order)
    traces = trace_values(mesh, quad, full)
    weighted = traces * (quad.weights * _weights_at(g, quad.s))[:, None]
    return traces.T @ weighted


def normal_derivative_integral(
    spec: Spectrum, g: ArcMap | None, mode: int, order: int | None = None
) -> float:
    """Integral of (du_k/dnu)^2 g over the boundary for a fully Dirichlet mode.

    Raises:
        ConfigurationError: If the mode is not Dirichlet-constrained on the whole boundary
    """
    return float(normal_derivative_gram(spec, g, [mode], order)[0, 0])


def eigenvector_defect(
    perturbed: Spectrum, limit: Spectrum, mode: int, cluster_tol: float | None = None
) -> float:
    """1 - ||P u_k||_M^2, with P the M-projection onto the matching limit cluster.

    Args:
        perturbed: Spectrum of the perturbed problem
        limit: Spectrum of the limit problem on the same triangulation
        mode: Mode index in both spectra
        cluster_tol: Relative gap used to group the limit cluster (settings
            match tolerance when omitted)

    Raises:
        ConfigurationError: If the spectra live on different vertex sets
    """
    if perturbed.mesh.n_vertices != limit.mesh.n_vertices:
        raise ConfigurationError("Eigenvector defect needs both spectra on one triangulation")
    grouped = limit.regroup(cluster_tol or get_settings().match_tolerance)
    members = grouped.cluster_of(mode)
    u = perturbed.eigenvectors[:, mode]
    projection = limit.eigenvectors[:, members].T @ (perturbed.operators.M @ u)
    return float(1.0 - np.sum(projection**2))


def write_spectrum_csv(spec: Spectrum, path: Path) -> Path:
    """Write (index, eigenvalue, residual, cluster) rows."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["index", "eigenvalue", "residual", "cluster"])
        for i in range(spec.k):
            writer.writerow(
                [
                    i + 1,
                    f"{spec.eigenvalues[i]:.12e}",
                    f"{spec.residuals[i]:.3e}",
                    int(spec.cluster_ids[i]),
                ]
            )
    logger.info(f"Wrote {spec.k} eigenvalues to {path}")
    return path


def write_eigenvectors_csv(spec: Spectrum, path: Path) -> Path:
    """Write per-vertex coordinates, Dirichlet flag and eigenvector values."""
    mesh = spec.mesh
    dirichlet = np.zeros(mesh.n_vertices, dtype=int)
    dirichlet[spec.operators.dirichlet_dofs] = 1
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["x", "y", "dirichlet"] + [f"u_{i + 1}" for i in range(spec.k)])
        for v in range(mesh.n_vertices):
            x, y = mesh.vertices[v]
            writer.writerow(
                [f"{x:.12e}", f"{y:.12e}", dirichlet[v]]
                + [f"{value:.12e}" for value in spec.eigenvectors[v]]
            )
    logger.info(f"Wrote {spec.k} eigenvectors on {mesh.n_vertices} vertices to {path}")
    return path


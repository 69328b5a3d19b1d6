"""Finite element solves of the limiting problems and within-cluster rotations."""

import logging

import numpy as np
from scipy.linalg import eigh, eigvalsh

from app.config import get_settings
from app.errors import ConfigurationError
from app.fem import Spectrum, assemble, boundary_trace_gram, solve_eigs
from app.geometry.models import ArcMap, ThetaMap
from app.mesh import Mesh, boundary_quadrature, with_uniform_tag

from .models import LimitProblem

logger = logging.getLogger(__name__)

SINGULAR_GRAM = 1e-12


def solve_limit(
    problem: LimitProblem,
    mesh: Mesh,
    theta_map: ThetaMap,
    k: int,
    tol: float | None = None,
) -> Spectrum:
    """Solve a limiting problem on a uniformly re-tagged copy of `mesh`.

    Args:
        problem: Dirichlet, Robin(A), Neumann or shifted Robin(A, mu)
        mesh: Triangulation (its tags are replaced)
        theta_map: Map supplying theta'_0 or theta'_eps for the Robin weight
        k: Number of eigenpairs
        tol: Solver tolerance

    Returns:
        Ascending spectrum of the limiting problem
    """
    tagged = with_uniform_tag(mesh, problem.boundary_tag)
    spec = solve_eigs(assemble(tagged, weight=problem.weight(theta_map)), k, tol)
    logger.debug(f"Limit {problem.label}: lambda_1={spec.eigenvalues[0]:.8g}")
    return spec


def weighted_orthogonalize(
    spec: Spectrum, weight: ArcMap | None, cluster: int, order: int | None = None
) -> Spectrum:
    """Rotate one cluster so its boundary Gram with weight theta' is diagonal.

    The rotation diagonalizes the boundary form and the M form simultaneously,
    so the cluster stays M-orthonormal.

    Args:
        spec: Spectrum whose clusters define the rotation blocks
        weight: Positive boundary weight (1 when omitted)
        cluster: Cluster id
        order: Gauss points per edge

    Returns:
        Spectrum with the rotated eigenvectors (unchanged for a single mode)

    Raises:
        ConfigurationError: If the weight is not positive or the boundary Gram is
            singular (eigenfunctions vanish on the boundary)
    """
    members = spec.cluster_members(cluster)
    if len(members) < 2:
        return spec

    if weight is not None:
        nodes = boundary_quadrature(spec.mesh, order or get_settings().quadrature_order).s
        if np.any(np.asarray(weight(nodes)) <= 0):
            raise ConfigurationError("Orthogonalization weight must be positive on the boundary")

    boundary_gram = boundary_trace_gram(spec, weight, members, order)
    boundary_gram = 0.5 * (boundary_gram + boundary_gram.T)
    if eigvalsh(boundary_gram)[0] <= SINGULAR_GRAM:
        raise ConfigurationError(
            f"Boundary Gram of cluster {cluster} is singular; "
            f"eigenfunctions vanish on the boundary"
        )
    block = spec.eigenvectors[:, members]
    mass_gram = block.T @ (spec.operators.M @ block)
    _, rotation = eigh(boundary_gram, 0.5 * (mass_gram + mass_gram.T))

    rotated = block @ rotation
    peaks = rotated[np.argmax(np.abs(rotated), axis=0), np.arange(len(members))]
    rotated *= np.where(peaks < 0, -1.0, 1.0)

    vectors = spec.eigenvectors.copy()
    vectors[:, members] = rotated
    return spec.with_vectors(vectors)


def orthogonalize_clusters(
    spec: Spectrum, weight: ArcMap | None, tol: float | None = None, order: int | None = None
) -> Spectrum:
    """Regroup with the matching tolerance and rotate every multi-mode cluster."""
    grouped = spec.regroup(tol or get_settings().match_tolerance)
    for cluster in range(grouped.n_clusters):
        grouped = weighted_orthogonalize(grouped, weight, cluster, order)
    return grouped

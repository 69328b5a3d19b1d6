"""Element-wise P1 assembly of stiffness, mass and weighted boundary mass."""

import logging

import numpy as np
from scipy import sparse

from app.config import get_settings
from app.errors import ConfigurationError
from app.geometry.models import ArcMap
from app.mesh.models import BoundaryTag, Mesh
from app.mesh.quadrature import gauss_rule

from .models import OperatorSet

logger = logging.getLogger(__name__)


def stiffness_and_mass(mesh: Mesh) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
    """Assemble the P1 stiffness and consistent mass matrices.

    Off-diagonal stiffness entries are -cot/2 of the opposite angle, and the
    diagonal follows from zero row sums.

    Args:
        mesh: Counterclockwise triangulation

    Returns:
        (K, M) as CSR matrices of size n_vertices
    """
    t1, t2, t3 = mesh.triangles[:, 0], mesh.triangles[:, 1], mesh.triangles[:, 2]
    v1, v2, v3 = mesh.vertices[t1], mesh.vertices[t2], mesh.vertices[t3]
    v2mv1 = v2 - v1
    v3mv2 = v3 - v2
    v1mv3 = v1 - v3
    # 4 * area of each triangle
    cr = v3mv2[:, 0] * v1mv3[:, 1] - v3mv2[:, 1] * v1mv3[:, 0]
    vol = 2.0 * np.abs(cr)

    a12 = np.sum(v3mv2 * v1mv3, axis=1) / vol
    a23 = np.sum(v1mv3 * v2mv1, axis=1) / vol
    a31 = np.sum(v2mv1 * v3mv2, axis=1) / vol
    a11 = -a12 - a31
    a22 = -a12 - a23
    a33 = -a31 - a23
    local_k = np.column_stack((a12, a12, a23, a23, a31, a31, a11, a22, a33)).reshape(-1)
    i = np.column_stack((t1, t2, t2, t3, t3, t1, t1, t2, t3)).reshape(-1)
    j = np.column_stack((t2, t1, t3, t2, t1, t3, t1, t2, t3)).reshape(-1)

    b_ii = vol / 24.0
    b_ij = vol / 48.0
    local_m = np.column_stack((b_ij, b_ij, b_ij, b_ij, b_ij, b_ij, b_ii, b_ii, b_ii)).reshape(-1)

    n = mesh.n_vertices
    K = sparse.coo_matrix((local_k, (i, j)), shape=(n, n)).tocsr()
    M = sparse.coo_matrix((local_m, (i, j)), shape=(n, n)).tocsr()
    return K, M


def boundary_mass(
    mesh: Mesh,
    weight: ArcMap | None,
    edges: np.ndarray,
    order: int = 4,
) -> sparse.csr_matrix:
    """Assemble the boundary mass with weight w(s) on the given boundary edges.

    Each edge contributes its chord length times a Gauss rule in the local
    coordinate, with w evaluated at the matching arclength on the true curve.

    Raises:
        ConfigurationError: If the weight is not finite at a quadrature node
    """
    n = mesh.n_vertices
    if len(edges) == 0:
        return sparse.csr_matrix((n, n))

    t, w = gauss_rule(order)
    intervals = mesh.edge_intervals[edges]
    s = intervals[:, :1] + (intervals[:, 1] - intervals[:, 0])[:, None] * t[None, :]
    if weight is None:
        values = np.ones_like(s)
    else:
        values = np.asarray(weight(np.mod(s, mesh.total_length)), dtype=float).reshape(s.shape)
    if not np.all(np.isfinite(values)):
        raise ConfigurationError("Boundary weight is not finite at some quadrature nodes")

    chords = mesh.edge_chords[edges]
    weighted = values * w[None, :] * chords[:, None]
    b00 = np.sum(weighted * (1.0 - t) ** 2, axis=1)
    b01 = np.sum(weighted * (1.0 - t) * t, axis=1)
    b11 = np.sum(weighted * t**2, axis=1)

    pairs = mesh.boundary_edges[edges]
    p, q = pairs[:, 0], pairs[:, 1]
    rows = np.concatenate([p, p, q, q])
    cols = np.concatenate([p, q, p, q])
    data = np.concatenate([b00, b01, b01, b11])
    return sparse.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()


def assemble(mesh: Mesh, weight: ArcMap | None = None, order: int | None = None) -> OperatorSet:
    """Assemble the operators for the boundary condition encoded by the edge tags.

    Dirichlet-tagged edges constrain their vertices, Robin-tagged edges carry
    the boundary mass with weight w, and Neumann edges contribute nothing.

    Args:
        mesh: Tagged mesh
        weight: Robin weight w(s); required only when Robin edges are present
        order: Gauss points per edge (defaults to the configured quadrature order)

    Returns:
        Operator set with the constrained vertex set

    Raises:
        ConfigurationError: If Robin edges are present without a weight, or the
            weight is not finite
    """
    order = order or get_settings().quadrature_order
    K, M = stiffness_and_mass(mesh)
    robin = mesh.tagged_edges(BoundaryTag.ROBIN)
    if len(robin) and weight is None:
        raise ConfigurationError("Mesh has Robin edges but no boundary weight was given")
    B = boundary_mass(mesh, weight, robin, order)
    dirichlet = mesh.tagged_vertices(BoundaryTag.DIRICHLET)

    logger.debug(
        f"Assembled {mesh.n_vertices} DOFs: {len(dirichlet)} Dirichlet, "
        f"{len(robin)} Robin edges"
    )
    return OperatorSet(K=K, M=M, B=B, dirichlet_dofs=dirichlet, mesh=mesh)

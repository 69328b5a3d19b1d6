"""Edge-wise Gauss-Legendre quadrature along the boundary in arclength."""

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from app.errors import ConfigurationError

from .models import BoundaryQuadrature, Mesh

SUPPORTED_ORDERS = (2, 4, 8)


@lru_cache(maxsize=8)
def gauss_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes in [0, 1] and weights summing to one."""
    if order not in SUPPORTED_ORDERS:
        raise ConfigurationError(f"Quadrature order must be one of {SUPPORTED_ORDERS}, got {order}")
    x, w = leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def boundary_quadrature(mesh: Mesh, order: int = 4) -> BoundaryQuadrature:
    """Gauss nodes on every boundary edge, carrying arclength coordinates on the true curve.

    Args:
        mesh: Mesh with boundary arclength coordinates
        order: Points per edge (2, 4 or 8)

    Returns:
        Quadrature whose weights sum to S; `t` is the local coordinate along each edge
    """
    t, w = gauss_rule(order)
    intervals = mesh.edge_intervals
    lengths = intervals[:, 1] - intervals[:, 0]
    s = intervals[:, :1] + lengths[:, None] * t[None, :]
    weights = lengths[:, None] * w[None, :]
    edge = np.repeat(np.arange(mesh.n_boundary), order)
    return BoundaryQuadrature(
        s=np.mod(s.ravel(), mesh.total_length),
        weights=weights.ravel(),
        tags=mesh.edge_tags[edge],
        edge=edge,
        t=np.tile(t, mesh.n_boundary),
    )


def trace_values(mesh: Mesh, quad: BoundaryQuadrature, values: np.ndarray) -> np.ndarray:
    """Interpolate nodal P1 values to the quadrature nodes.

    `values` may hold one field per column.
    """
    pairs = mesh.boundary_edges[quad.edge]
    t = quad.t if values.ndim == 1 else quad.t[:, None]
    return (1.0 - t) * values[pairs[:, 0]] + t * values[pairs[:, 1]]

"""Boundary-conforming triangulation, tagging and boundary quadrature."""

from app.mesh.io import read_mesh, write_mesh
from app.mesh.models import BoundaryQuadrature, BoundaryTag, Mesh, MeshQuality, SizeField
from app.mesh.quadrature import boundary_quadrature, gauss_rule, trace_values
from app.mesh.triangulator import (
    build_size_field,
    mesh_quality,
    place_boundary_points,
    retag,
    tag_edges,
    triangulate,
    with_uniform_tag,
)

__all__ = [
    "BoundaryQuadrature",
    "BoundaryTag",
    "Mesh",
    "MeshQuality",
    "SizeField",
    "boundary_quadrature",
    "build_size_field",
    "gauss_rule",
    "mesh_quality",
    "place_boundary_points",
    "read_mesh",
    "retag",
    "tag_edges",
    "trace_values",
    "triangulate",
    "with_uniform_tag",
]

"""Plain-text mesh export and import.

Layout (whitespace separated, '#' header lines):

    # vertices <n>
    x y                      (n rows)
    # triangles <m>
    i j k                    (m rows, counterclockwise)
    # boundary <nb> <S>
    s tag                    (nb rows; edge e joins boundary vertices e and e+1)
"""

import logging
from pathlib import Path

import numpy as np

from app.errors import MeshError

from .models import Mesh

logger = logging.getLogger(__name__)


def write_mesh(mesh: Mesh, path: Path) -> Path:
    """Write a mesh to `path` in the plain-text layout."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as handle:
        handle.write(f"# vertices {mesh.n_vertices}\n")
        np.savetxt(handle, mesh.vertices, fmt="%.17e")
        handle.write(f"# triangles {len(mesh.triangles)}\n")
        np.savetxt(handle, mesh.triangles, fmt="%d")
        handle.write(f"# boundary {mesh.n_boundary} {mesh.total_length:.17e}\n")
        for s, tag in zip(mesh.boundary_s, mesh.edge_tags, strict=True):
            handle.write(f"{s:.17e} {int(tag)}\n")
    logger.info(f"Wrote mesh with {mesh.n_vertices} vertices to {path}")
    return path


def read_mesh(path: Path) -> Mesh:
    """Read a mesh written by `write_mesh`.

    Raises:
        MeshError: If the file does not follow the layout
    """
    try:
        lines = path.read_text().splitlines()
        n_vertices = int(lines[0].split()[2])
        vertices = np.loadtxt(lines[1 : 1 + n_vertices], ndmin=2)
        cursor = 1 + n_vertices
        n_triangles = int(lines[cursor].split()[2])
        block = lines[cursor + 1 : cursor + 1 + n_triangles]
        triangles = np.loadtxt(block, dtype=np.int64, ndmin=2)
        cursor += 1 + n_triangles
        header = lines[cursor].split()
        n_boundary, total_length = int(header[2]), float(header[3])
        boundary = np.loadtxt(lines[cursor + 1 : cursor + 1 + n_boundary], ndmin=2)
    except (OSError, IndexError, ValueError) as e:
        raise MeshError(f"Cannot read mesh from {path}: {e}") from e

    v = vertices[triangles]
    h_max = float(np.max(np.linalg.norm(v - np.roll(v, -1, axis=1), axis=2)))
    return Mesh(
        vertices=vertices,
        triangles=triangles,
        boundary_s=boundary[:, 0],
        edge_tags=boundary[:, 1].astype(np.int8),
        total_length=total_length,
        h_max=h_max,
    )

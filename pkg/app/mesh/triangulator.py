"""Graded boundary-conforming triangulation with per-edge boundary tags."""

import logging
import math
from collections.abc import Sequence
from dataclasses import replace

import numpy as np
import triangle

from app.config import get_settings
from app.errors import ConfigurationError, MeshError
from app.geometry.models import AlternationConfig, BoundaryCurve

from .models import BoundaryTag, Mesh, MeshQuality, SizeField

logger = logging.getLogger(__name__)

MIN_TRIANGLE_AREA = 1e-14


def build_size_field(
    configs: Sequence[AlternationConfig],
    h: float,
    n_min: int,
    ratio: float,
    total_length: float,
    tip_factor: float = 1.0,
) -> SizeField:
    """Collect arc endpoints and local sizes from one or more configurations."""
    endpoints, local_sizes, starts, lengths = [], [], [], []
    for cfg in configs:
        for j in cfg.nonempty:
            length = float(cfg.arc_lengths[j])
            local = length / n_min
            start = float(np.mod(cfg.starts[j], total_length))
            end = float(np.mod(cfg.ends[j], total_length))
            endpoints += [start, end]
            local_sizes += [local, local]
            starts.append(start)
            lengths.append(length)
    return SizeField(
        h=h,
        ratio=ratio,
        n_min=n_min,
        total_length=total_length,
        endpoints=np.asarray(endpoints),
        local_sizes=np.asarray(local_sizes),
        arc_starts=np.asarray(starts),
        arc_lengths=np.asarray(lengths),
        tip_factor=tip_factor,
    )


def _mandatory_points(configs: Sequence[AlternationConfig], total_length: float) -> np.ndarray:
    points = np.sort(np.concatenate([cfg.endpoints() for cfg in configs] + [np.empty(0)]))
    if points.size == 0:
        return points
    tol = 1e-12 * total_length
    points[points > total_length - tol] = 0.0
    points = np.sort(points)
    keep = np.append(True, np.diff(points) > tol)
    return points[keep]


def _fill_segment(field: SizeField, start: float, length: float) -> np.ndarray:
    """Interior points of one boundary segment by equidistribution of 1/size."""
    fine = field.tip_size / 4.0
    geometric = fine * 2.0 ** np.arange(0, max(1, math.ceil(math.log2(length / fine)) + 1))
    geometric = geometric[geometric < length]
    offsets = np.unique(
        np.concatenate([np.linspace(0.0, length, 513), geometric, length - geometric])
    )
    density = 1.0 / field(start + offsets)
    cumulative = np.concatenate(
        [[0.0], np.cumsum(0.5 * (density[1:] + density[:-1]) * np.diff(offsets))]
    )
    count = max(1, math.ceil(cumulative[-1] - 1e-9))
    if count == 1:
        return np.empty(0)
    levels = cumulative[-1] * np.arange(1, count) / count
    return start + np.interp(levels, cumulative, offsets)


def place_boundary_points(field: SizeField, mandatory: np.ndarray) -> np.ndarray:
    """Arclength positions of boundary vertices, ascending in [0, S).

    Args:
        field: Boundary size field
        mandatory: Points that must be vertices (arc endpoints)

    Returns:
        Sorted boundary arclength coordinates
    """
    S = field.total_length
    if mandatory.size == 0:
        count = max(3, math.ceil(S / field.h - 1e-9))
        return np.linspace(0.0, S, count, endpoint=False)

    pieces = []
    for i, start in enumerate(mandatory):
        end = mandatory[i + 1] if i + 1 < len(mandatory) else mandatory[0] + S
        pieces.append([start])
        pieces.append(_fill_segment(field, start, end - start))
    points = np.concatenate(pieces)
    points = np.mod(points, S)
    order = np.argsort(points, kind="stable")
    return points[order]


def tag_edges(
    boundary_s: np.ndarray,
    total_length: float,
    cfg: AlternationConfig | None,
    inside: BoundaryTag = BoundaryTag.DIRICHLET,
    outside: BoundaryTag = BoundaryTag.NEUMANN,
) -> np.ndarray:
    """Tag each boundary edge by whether its midpoint lies in an arc."""
    ends = np.append(boundary_s[1:], boundary_s[0] + total_length)
    midpoints = 0.5 * (boundary_s + ends)
    tags = np.full(len(boundary_s), int(outside), dtype=np.int8)
    if cfg is not None:
        tags[cfg.contains_points(midpoints)] = int(inside)
    return tags


def _triangle_flags(h: float) -> str:
    max_area = h * h * math.sqrt(3.0) / 4.0
    return f"pq30Ya{max_area:.12f}Q"


def triangulate(
    curve: BoundaryCurve,
    cfg: AlternationConfig | None,
    h: float,
    n_min: int = 4,
    companions: Sequence[AlternationConfig] = (),
    grading_ratio: float | None = None,
    junction_refinement: float | None = None,
) -> Mesh:
    """Triangulate the domain bounded by `curve` with every arc endpoint as a vertex.

    Args:
        curve: Boundary curve
        cfg: Configuration whose arcs are tagged Dirichlet (None for an untagged mesh)
        h: Target interior edge length
        n_min: Minimum number of boundary edges inside each nonempty arc
        companions: Further configurations whose endpoints must also be vertices
        grading_ratio: Growth ratio of boundary edges away from arc endpoints
            (settings default when omitted)
        junction_refinement: Factor by which endpoint edges are smaller than the
            in-arc size, limited by the size floor (settings default when omitted)

    Returns:
        Mesh with Dirichlet tags on the arcs of `cfg` and Neumann elsewhere

    Raises:
        ConfigurationError: If h, n_min or the grading parameters are out of range
        MeshError: If an arc is thinner than the size floor or triangulation fails
    """
    if not h > 0:
        raise ConfigurationError(f"Mesh size h must be positive, got {h}")
    if n_min < 4:
        raise ConfigurationError(f"n_min must be at least 4, got {n_min}")

    settings = get_settings()
    S = curve.total_length
    configs = [c for c in (cfg, *companions) if c is not None]
    ratio = grading_ratio or settings.grading_ratio
    refinement = junction_refinement or settings.junction_refinement
    if ratio <= 1 or refinement < 1:
        raise ConfigurationError(
            f"Grading ratio must exceed 1 and junction refinement be at least 1, "
            f"got {ratio} and {refinement}"
        )
    field = build_size_field(configs, h, n_min, ratio, S)
    floor = settings.size_floor * S
    if field.min_size < floor:
        raise MeshError(
            f"Arc resolution {field.min_size:.3e} is below the size floor {floor:.3e}; "
            f"use a larger eta or cap N"
        )
    field = replace(field, tip_factor=max(1.0, min(refinement, field.min_size / floor)))

    boundary_s = place_boundary_points(field, _mandatory_points(configs, S))
    points = curve.position(boundary_s)
    n_boundary = len(boundary_s)
    ring = np.arange(n_boundary, dtype=np.int32)
    segments = np.column_stack([ring, np.roll(ring, -1)])

    logger.debug(f"Triangulating with {n_boundary} boundary vertices, flags {_triangle_flags(h)}")
    try:
        result = triangle.triangulate(
            {"vertices": points, "segments": segments}, _triangle_flags(h)
        )
    except Exception as e:
        raise MeshError(f"Triangle failed on {n_boundary} boundary vertices: {e}") from e

    vertices = np.asarray(result["vertices"], dtype=float)
    triangles = np.asarray(result["triangles"], dtype=np.int64)
    if not np.allclose(vertices[:n_boundary], points, atol=1e-12):
        raise MeshError("Triangulation reordered or moved boundary vertices")

    triangles = _orient_counterclockwise(vertices, triangles)
    mesh = Mesh(
        vertices=vertices,
        triangles=triangles,
        boundary_s=boundary_s,
        edge_tags=tag_edges(boundary_s, S, cfg),
        total_length=S,
        h_max=_max_edge_length(vertices, triangles),
    )
    logger.info(
        f"Mesh: {mesh.n_vertices} vertices, {len(triangles)} triangles, "
        f"{n_boundary} boundary edges, h_max={mesh.h_max:.4f}"
    )
    return mesh


def _orient_counterclockwise(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    v = vertices[triangles]
    e1 = v[:, 1] - v[:, 0]
    e2 = v[:, 2] - v[:, 0]
    signed = 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    if np.any(np.abs(signed) < MIN_TRIANGLE_AREA):
        raise MeshError(
            f"Refinement produced a degenerate triangle (area {np.min(np.abs(signed)):.3e})"
        )
    flipped = triangles.copy()
    negative = signed < 0
    flipped[negative] = flipped[negative][:, [0, 2, 1]]
    return flipped


def _max_edge_length(vertices: np.ndarray, triangles: np.ndarray) -> float:
    v = vertices[triangles]
    lengths = np.linalg.norm(v - np.roll(v, -1, axis=1), axis=2)
    return float(np.max(lengths))


def retag(
    mesh: Mesh,
    cfg: AlternationConfig | None,
    inside: BoundaryTag = BoundaryTag.DIRICHLET,
    outside: BoundaryTag = BoundaryTag.NEUMANN,
) -> Mesh:
    """Re-tag a mesh for another configuration whose endpoints are already vertices.

    Raises:
        MeshError: If an arc endpoint of `cfg` is not a boundary vertex
    """
    if cfg is not None:
        S = mesh.total_length
        for point in cfg.endpoints():
            gap = np.abs(mesh.boundary_s - point)
            if np.min(np.minimum(gap, S - gap)) > 1e-10 * S:
                raise MeshError(f"Arc endpoint s={point:.12g} is not a vertex of this mesh")
    return mesh.with_tags(tag_edges(mesh.boundary_s, mesh.total_length, cfg, inside, outside))


def with_uniform_tag(mesh: Mesh, tag: BoundaryTag) -> Mesh:
    """Copy of the mesh with every boundary edge carrying `tag`."""
    return mesh.with_tags(np.full(mesh.n_boundary, int(tag), dtype=np.int8))


def mesh_quality(mesh: Mesh) -> MeshQuality:
    """Minimum angle, areas, tag lengths and boundary cycle check."""
    v = mesh.vertices[mesh.triangles]
    sides = np.linalg.norm(v - np.roll(v, -1, axis=1), axis=2)
    a, b, c = sides[:, 0], sides[:, 1], sides[:, 2]
    cosines = np.stack(
        [
            (a**2 + c**2 - b**2) / (2 * a * c),
            (a**2 + b**2 - c**2) / (2 * a * b),
            (b**2 + c**2 - a**2) / (2 * b * c),
        ]
    )
    angles = np.degrees(np.arccos(np.clip(cosines, -1.0, 1.0)))

    dirichlet = mesh.tagged_edges(BoundaryTag.DIRICHLET)
    tri_edges = np.sort(mesh.triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2), axis=1)
    edge_set = set(map(tuple, tri_edges.tolist()))
    boundary_pairs = np.sort(mesh.boundary_edges, axis=1).tolist()
    cycle_closed = all(tuple(pair) in edge_set for pair in boundary_pairs)

    return MeshQuality(
        n_vertices=mesh.n_vertices,
        n_triangles=len(mesh.triangles),
        min_angle_deg=float(np.min(angles)),
        min_area=float(np.min(mesh.triangle_areas)),
        area=mesh.area,
        h_max=mesh.h_max,
        dirichlet_arclength=mesh.tag_length(BoundaryTag.DIRICHLET),
        dirichlet_chord_length=float(np.sum(mesh.edge_chords[dirichlet])),
        cycle_closed=cycle_closed,
    )

"""Data models for boundary-conforming triangulations."""

from dataclasses import dataclass, field, replace
from enum import IntEnum

import numpy as np


class BoundaryTag(IntEnum):
    """Boundary condition carried by a boundary edge."""

    NEUMANN = 0
    DIRICHLET = 1
    ROBIN = 2


@dataclass(frozen=True, eq=False)
class Mesh:
    """P1 triangulation whose first `n_boundary` vertices trace the boundary cycle.

    Boundary edge e joins boundary vertices e and e+1 (mod n_boundary) and covers the
    arclength interval [boundary_s[e], boundary_s[e+1]], the last one wrapping past S.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_s: np.ndarray
    edge_tags: np.ndarray
    total_length: float
    h_max: float

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_boundary(self) -> int:
        return len(self.boundary_s)

    @property
    def boundary_vertices(self) -> np.ndarray:
        return np.arange(self.n_boundary)

    @property
    def boundary_edges(self) -> np.ndarray:
        """(n_boundary, 2) vertex pairs in cyclic order."""
        first = np.arange(self.n_boundary)
        return np.column_stack([first, np.roll(first, -1)])

    @property
    def edge_intervals(self) -> np.ndarray:
        """(n_boundary, 2) arclength intervals, the last one ending at s_0 + S."""
        ends = np.append(self.boundary_s[1:], self.boundary_s[0] + self.total_length)
        return np.column_stack([self.boundary_s, ends])

    @property
    def edge_chords(self) -> np.ndarray:
        pairs = self.boundary_edges
        return np.linalg.norm(self.vertices[pairs[:, 1]] - self.vertices[pairs[:, 0]], axis=1)

    @property
    def triangle_areas(self) -> np.ndarray:
        v = self.vertices[self.triangles]
        e1 = v[:, 1] - v[:, 0]
        e2 = v[:, 2] - v[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    @property
    def area(self) -> float:
        return float(np.sum(self.triangle_areas))

    def tagged_edges(self, tag: BoundaryTag) -> np.ndarray:
        return np.flatnonzero(self.edge_tags == tag)

    def tagged_vertices(self, tag: BoundaryTag) -> np.ndarray:
        """Vertices touched by at least one edge with the given tag."""
        return np.unique(self.boundary_edges[self.tagged_edges(tag)])

    def tag_length(self, tag: BoundaryTag) -> float:
        """Total arclength covered by edges with the given tag."""
        intervals = self.edge_intervals[self.tagged_edges(tag)]
        return float(np.sum(intervals[:, 1] - intervals[:, 0]))

    def with_tags(self, edge_tags: np.ndarray) -> "Mesh":
        """Copy sharing geometry but carrying different boundary tags."""
        return replace(self, edge_tags=np.asarray(edge_tags, dtype=np.int8))


@dataclass(frozen=True)
class SizeField:
    """Target boundary edge length, graded geometrically toward arc endpoints.

    Inside a Dirichlet arc the size is at most the arc length over n_min. Around
    each endpoint it grows like local / tip_factor + (ratio - 1) * distance, capped
    at h, so elements shrink toward the junctions where the solution is singular.
    """

    h: float
    ratio: float
    n_min: int
    total_length: float
    endpoints: np.ndarray = field(default_factory=lambda: np.empty(0))
    local_sizes: np.ndarray = field(default_factory=lambda: np.empty(0))
    arc_starts: np.ndarray = field(default_factory=lambda: np.empty(0))
    arc_lengths: np.ndarray = field(default_factory=lambda: np.empty(0))
    tip_factor: float = 1.0

    @property
    def min_size(self) -> float:
        if self.local_sizes.size == 0:
            return self.h
        return float(min(self.h, np.min(self.local_sizes)))

    @property
    def tip_size(self) -> float:
        """Edge length at the arc endpoints."""
        return self.min_size / self.tip_factor

    def __call__(self, s: np.ndarray) -> np.ndarray:
        s = np.mod(np.asarray(s, dtype=float), self.total_length)
        size = np.full(s.shape, self.h)
        S = self.total_length
        for point, local in zip(self.endpoints, self.local_sizes, strict=True):
            gap = np.abs(s - point)
            dist = np.minimum(gap, S - gap)
            size = np.minimum(size, local / self.tip_factor + (self.ratio - 1.0) * dist)
        for start, length in zip(self.arc_starts, self.arc_lengths, strict=True):
            offset = np.mod(s - start, S)
            inside = offset <= length
            size = np.where(inside, np.minimum(size, length / self.n_min), size)
        return size


@dataclass(frozen=True)
class MeshQuality:
    """Summary of mesh quality and tag bookkeeping."""

    n_vertices: int
    n_triangles: int
    min_angle_deg: float
    min_area: float
    area: float
    h_max: float
    dirichlet_arclength: float
    dirichlet_chord_length: float
    cycle_closed: bool


@dataclass(frozen=True)
class BoundaryQuadrature:
    """Gauss-Legendre nodes on the boundary, in arclength."""

    s: np.ndarray
    weights: np.ndarray
    tags: np.ndarray
    edge: np.ndarray
    t: np.ndarray

    def __len__(self) -> int:
        return len(self.s)

"""Data models for assembled operators and computed spectra."""

from dataclasses import dataclass, replace

import numpy as np
from scipy import sparse

from app.mesh.models import Mesh


def cluster_ids(values: np.ndarray, tol: float) -> np.ndarray:
    """Group ascending eigenvalues whose relative gap is below `tol`.

    The gap between neighbours is measured against max(|lambda|, 1), so the
    Neumann zero eigenvalue never forms a cluster with small positive values
    by accident of scaling.
    """
    ids = np.zeros(len(values), dtype=int)
    for i in range(1, len(values)):
        scale = max(abs(values[i]), 1.0)
        ids[i] = ids[i - 1] + int(values[i] - values[i - 1] > tol * scale)
    return ids


@dataclass(frozen=True, eq=False)
class OperatorSet:
    """P1 stiffness, mass and weighted boundary mass on one tagged mesh."""

    K: sparse.csr_matrix
    M: sparse.csr_matrix
    B: sparse.csr_matrix
    dirichlet_dofs: np.ndarray
    mesh: Mesh

    @property
    def free_dofs(self) -> np.ndarray:
        mask = np.ones(self.mesh.n_vertices, dtype=bool)
        mask[self.dirichlet_dofs] = False
        return np.flatnonzero(mask)

    @property
    def n_free(self) -> int:
        return self.mesh.n_vertices - len(self.dirichlet_dofs)

    @property
    def A(self) -> sparse.csr_matrix:
        """K + B_w, the operator on the left of the eigenproblem."""
        return (self.K + self.B).tocsr()


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Lowest eigenpairs of (K + B_w) u = lambda M u on the free DOFs.

    Eigenvectors are stored on all vertices (zero on Dirichlet DOFs), one per
    column, M-orthonormal.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray
    cluster_ids: np.ndarray
    operators: OperatorSet
    tol: float

    @property
    def k(self) -> int:
        return len(self.eigenvalues)

    @property
    def mesh(self) -> Mesh:
        return self.operators.mesh

    @property
    def n_clusters(self) -> int:
        return int(self.cluster_ids[-1]) + 1 if self.k else 0

    def cluster_members(self, cluster: int) -> np.ndarray:
        """Mode indices belonging to one cluster."""
        return np.flatnonzero(self.cluster_ids == cluster)

    def cluster_of(self, mode: int) -> np.ndarray:
        """Mode indices sharing a cluster with `mode`."""
        return self.cluster_members(int(self.cluster_ids[mode]))

    def clusters(self) -> list[np.ndarray]:
        return [self.cluster_members(c) for c in range(self.n_clusters)]

    def regroup(self, tol: float) -> "Spectrum":
        """Same eigenpairs clustered with another relative gap."""
        return replace(self, cluster_ids=cluster_ids(self.eigenvalues, tol))

    def with_vectors(self, eigenvectors: np.ndarray) -> "Spectrum":
        return replace(self, eigenvectors=eigenvectors)

    def gram(self) -> np.ndarray:
        """M-Gram matrix of the eigenvectors."""
        U = self.eigenvectors
        return U.T @ (self.operators.M @ U)

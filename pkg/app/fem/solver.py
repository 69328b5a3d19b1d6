"""Generalized symmetric eigensolver: shift-invert Lanczos with a dense fallback."""

import logging

import numpy as np
from scipy import sparse
from scipy.linalg import cholesky, eigh, solve_triangular
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh, splu

from app.config import EigenBackend, get_settings
from app.errors import ConfigurationError, NumericalError

from .models import OperatorSet, Spectrum, cluster_ids

logger = logging.getLogger(__name__)

SHIFT_RETRIES = 3
NEUMANN_SHIFT = -0.1


def _initial_shift(ops: OperatorSet) -> float:
    """Shift below the lowest eigenvalue: 0 with Dirichlet DOFs, negative otherwise.

    A negative Robin weight (used for finite differences in mu) can push the
    ground state below zero; the Rayleigh quotient of the constant bounds it.
    """
    if len(ops.dirichlet_dofs):
        return 0.0
    ones = np.ones(ops.mesh.n_vertices)
    rayleigh = float(ones @ (ops.B @ ones)) / float(ones @ (ops.M @ ones))
    return NEUMANN_SHIFT + 2.0 * min(rayleigh, 0.0)


def _shift_invert(
    A: sparse.csr_matrix, M: sparse.csr_matrix, k: int, tol: float, sigma: float
) -> tuple[np.ndarray, np.ndarray]:
    n = A.shape[0]
    for attempt in range(SHIFT_RETRIES):
        try:
            lu = splu((A - sigma * M).tocsc())
        except RuntimeError as e:
            logger.warning(f"Factorization failed at shift {sigma:.3g} ({e}); retrying")
            sigma -= 1.0
            continue
        op_inv = LinearOperator(matvec=lu.solve, shape=A.shape, dtype=A.dtype)
        logger.debug(f"Shift-invert attempt {attempt + 1} at sigma={sigma:.3g}")
        try:
            return eigsh(
                A,
                k,
                M,
                sigma=sigma,
                OPinv=op_inv,
                which="LM",
                tol=tol,
                v0=np.ones(n),
                maxiter=max(1000, 20 * n),
            )
        except ArpackNoConvergence as e:
            converged = len(e.eigenvalues)
            raise NumericalError(
                f"Lanczos did not converge: {converged} of {k} eigenpairs at shift {sigma:.3g}",
                estimate=float(converged),
            ) from e
    raise NumericalError(f"Factorization failed for {SHIFT_RETRIES} shifts down to {sigma + 1:.3g}")


def _reorthonormalize(vectors: np.ndarray, M: sparse.csr_matrix, ids: np.ndarray) -> np.ndarray:
    """Restore M-orthonormality inside each cluster by a Cholesky factor of its Gram."""
    out = vectors.copy()
    for cluster in np.unique(ids):
        members = np.flatnonzero(ids == cluster)
        block = out[:, members]
        gram = block.T @ (M @ block)
        factor = cholesky(0.5 * (gram + gram.T), lower=False)
        out[:, members] = solve_triangular(factor, block.T, trans="T", lower=False).T
    return out


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make the entry of largest magnitude positive in every column."""
    peaks = vectors[np.argmax(np.abs(vectors), axis=0), np.arange(vectors.shape[1])]
    return vectors * np.where(peaks < 0, -1.0, 1.0)


def solve_eigs(
    ops: OperatorSet, k: int, tol: float | None = None, residual_tol: float | None = None
) -> Spectrum:
    """Compute the lowest k eigenpairs of (K + B_w) u = lambda M u on the free DOFs.

    Args:
        ops: Assembled operators
        k: Number of eigenpairs, 1 <= k < number of free DOFs
        tol: Relative Lanczos tolerance in [1e-12, 1e-6] (defaults to settings)
        residual_tol: Residual bound relative to max(1, |lambda|) (defaults to settings)

    Returns:
        Ascending spectrum with M-orthonormal eigenvectors on all vertices

    Raises:
        ConfigurationError: If k or tol are out of range
        NumericalError: If factorization or Lanczos iteration fails, or a residual
            exceeds its bound (the error carries every residual)
    """
    settings = get_settings()
    tol = settings.eig_tolerance if tol is None else tol
    if not 1e-12 <= tol <= 1e-6:
        raise ConfigurationError(f"Solver tolerance must lie in [1e-12, 1e-6], got {tol}")
    free = ops.free_dofs
    if not 1 <= k < len(free):
        raise ConfigurationError(f"k must satisfy 1 <= k < {len(free)} free DOFs, got {k}")

    A = ops.A[free][:, free]
    M = ops.M[free][:, free]
    backend = settings.eig_backend
    dense = backend == EigenBackend.DENSE or (
        backend == EigenBackend.AUTO and len(free) <= settings.dense_threshold
    )
    if dense:
        values, vectors = eigh(A.toarray(), M.toarray(), subset_by_index=[0, k - 1])
    else:
        values, vectors = _shift_invert(A, M, k, tol, _initial_shift(ops))

    order = np.argsort(values, kind="stable")
    values = np.asarray(values[order], dtype=float)
    vectors = np.asarray(vectors[:, order], dtype=float)

    ids = cluster_ids(values, settings.cluster_tolerance)
    vectors = _fix_signs(_reorthonormalize(vectors, M, ids))

    residual_vectors = A @ vectors - (M @ vectors) * values
    residuals = np.linalg.norm(residual_vectors, axis=0) / np.linalg.norm(vectors, axis=0)
    residual_tol = settings.residual_tolerance if residual_tol is None else residual_tol
    bound = residual_tol * np.maximum(1.0, np.abs(values))
    if np.any(residuals > bound):
        worst = int(np.argmax(residuals / bound))
        raise NumericalError(
            f"Eigenpairs not converged: residual {residuals[worst]:.3e} of mode {worst} "
            f"exceeds {bound[worst]:.3e}; residuals {np.array2string(residuals, precision=3)}",
            estimate=float(residuals[worst]),
            residuals=residuals.tolist(),
        )

    full = np.zeros((ops.mesh.n_vertices, k))
    full[free] = vectors
    logger.debug(
        f"Solved {k} modes on {len(free)} free DOFs ({'dense' if dense else 'shift-invert'}): "
        f"lambda_1={values[0]:.8g}"
    )
    return Spectrum(
        eigenvalues=values,
        eigenvectors=full,
        residuals=residuals,
        cluster_ids=ids,
        operators=ops,
        tol=tol,
    )

"""Tests for P1 assembly, eigensolves and boundary integrals."""

import math
from unittest.mock import patch

import numpy as np
import pytest
from scipy import sparse
from scipy.linalg import eigh

from app.config import EigenBackend, Settings
from app.errors import ConfigurationError, NumericalError
from app.fem import (
    OperatorSet,
    assemble,
    boundary_trace_integral,
    cluster_ids,
    eigenvector_defect,
    normal_derivative_integral,
    solve_eigs,
    write_eigenvectors_csv,
    write_spectrum_csv,
)
from app.geometry import UniformRule, build_theta_map, circle, generate_alternation
from app.mesh import BoundaryTag, Mesh, retag, triangulate, with_uniform_tag

J01_SQUARED = 5.783185962946784


def _algebraic_ops(K: np.ndarray, M: np.ndarray) -> OperatorSet:
    """Operator set around bare matrices, with a placeholder mesh of matching size."""
    n = len(K)
    mesh = Mesh(
        vertices=np.zeros((n, 2)),
        triangles=np.zeros((0, 3), dtype=np.int64),
        boundary_s=np.zeros(0),
        edge_tags=np.zeros(0, dtype=np.int8),
        total_length=1.0,
        h_max=1.0,
    )
    return OperatorSet(
        K=sparse.csr_matrix(K),
        M=sparse.csr_matrix(M),
        B=sparse.csr_matrix((n, n)),
        dirichlet_dofs=np.empty(0, dtype=int),
        mesh=mesh,
    )


@pytest.fixture(scope="module")
def unit_circle():
    return circle()


@pytest.fixture(scope="module")
def mesh(unit_circle):
    return triangulate(unit_circle, None, h=0.1)


@pytest.fixture(scope="module")
def neumann(mesh):
    return solve_eigs(assemble(mesh), 6)


@pytest.fixture(scope="module")
def dirichlet(mesh):
    return solve_eigs(assemble(with_uniform_tag(mesh, BoundaryTag.DIRICHLET)), 6)


class TestAssembly:
    """Test stiffness, mass and boundary mass assembly."""

    def test_constants_in_kernel(self, mesh):
        """Test K 1 = 0 before constraints."""
        ops = assemble(mesh)
        assert np.max(np.abs(ops.K @ np.ones(mesh.n_vertices))) < 1e-10

    def test_mass_integrates_one(self, mesh):
        """Test 1^T M 1 = mesh area."""
        ones = np.ones(mesh.n_vertices)
        assert ones @ (assemble(mesh).M @ ones) == pytest.approx(mesh.area, abs=1e-12)

    def test_symmetry(self, mesh):
        """Test K and M are symmetric."""
        ops = assemble(mesh)
        for matrix in (ops.K, ops.M):
            assert abs(matrix - matrix.T).max() <= 1e-13 * abs(matrix).max()

    def test_boundary_mass_is_polygon_perimeter(self, mesh):
        """Test 1^T B 1 = n 2 sin(pi / n) for w = 1 on all-Robin edges."""
        robin = with_uniform_tag(mesh, BoundaryTag.ROBIN)
        ops = assemble(robin, weight=lambda s: np.ones_like(s))
        ones = np.ones(mesh.n_vertices)
        n = mesh.n_boundary
        assert ones @ (ops.B @ ones) == pytest.approx(2 * n * math.sin(math.pi / n), abs=1e-12)

    def test_neumann_has_no_boundary_term(self, mesh):
        """Test B = 0 and no constrained DOFs for an untagged mesh."""
        ops = assemble(mesh)
        assert ops.B.nnz == 0 or abs(ops.B).max() == 0
        assert len(ops.dirichlet_dofs) == 0

    def test_dirichlet_dofs(self, mesh):
        """Test that Dirichlet tags constrain exactly the boundary vertices."""
        ops = assemble(with_uniform_tag(mesh, BoundaryTag.DIRICHLET))
        assert np.array_equal(ops.dirichlet_dofs, np.arange(mesh.n_boundary))
        assert ops.n_free == mesh.n_vertices - mesh.n_boundary

    def test_non_finite_weight(self, mesh):
        """Test that a non-finite weight is rejected."""
        robin = with_uniform_tag(mesh, BoundaryTag.ROBIN)
        with pytest.raises(ConfigurationError, match="not finite"):
            assemble(robin, weight=lambda s: np.full_like(s, np.nan))

    def test_robin_needs_weight(self, mesh):
        """Test that Robin edges without a weight are rejected."""
        with pytest.raises(ConfigurationError, match="no boundary weight"):
            assemble(with_uniform_tag(mesh, BoundaryTag.ROBIN))


class TestSolver:
    """Test generalized eigensolves."""

    def test_diagonal_problem(self):
        """Test K = diag(2, 3, 5), M = I gives (2, 3)."""
        ops = _algebraic_ops(np.diag([2.0, 3.0, 5.0]), np.eye(3))
        spec = solve_eigs(ops, 2, tol=1e-12)
        assert spec.eigenvalues == pytest.approx([2.0, 3.0], abs=1e-12)

    @patch("app.fem.solver.get_settings")
    def test_shift_invert_matches_dense(self, mock_get_settings):
        """Test Lanczos against a dense solve on a random 12x12 SPD pair."""
        mock_get_settings.return_value = Settings(eig_backend=EigenBackend.SPARSE)
        rng = np.random.default_rng(7)
        R = rng.standard_normal((12, 12))
        Q = rng.standard_normal((12, 12))
        K = R @ R.T + 12 * np.eye(12)
        M = Q @ Q.T + 12 * np.eye(12)
        spec = solve_eigs(_algebraic_ops(K, M), 4, tol=1e-12)
        expected = eigh(K, M, eigvals_only=True)[:4]
        assert np.allclose(spec.eigenvalues, expected, rtol=1e-10, atol=0)

    @patch("app.fem.solver.eigh")
    def test_unconverged_pairs_raise(self, mock_eigh):
        """Test that a pair missing its residual bound raises with every residual."""
        def shifted_eigh(*args, **kwargs):
            values, vectors = eigh(*args, **kwargs)
            return values + 1e-3, vectors

        mock_eigh.side_effect = shifted_eigh
        ops = _algebraic_ops(np.diag([2.0, 3.0, 5.0]), np.eye(3))
        with pytest.raises(NumericalError, match="not converged") as excinfo:
            solve_eigs(ops, 2, tol=1e-12)
        assert excinfo.value.residuals == pytest.approx([1e-3, 1e-3], rel=1e-6)

    def test_tiny_residual_tolerance(self):
        """Test that a residual bound below round-off rejects an exact solve."""
        rng = np.random.default_rng(3)
        R = rng.standard_normal((8, 8))
        K = R @ R.T + 8 * np.eye(8)
        with pytest.raises(NumericalError, match="residual") as excinfo:
            solve_eigs(_algebraic_ops(K, np.eye(8)), 3, residual_tol=1e-300)
        assert len(excinfo.value.residuals) == 3

    def test_neumann_kernel(self, neumann):
        """Test lambda_1 = 0 with a constant eigenvector."""
        assert abs(neumann.eigenvalues[0]) < 1e-9
        u = neumann.eigenvectors[:, 0]
        assert np.std(u) < 1e-6 * abs(np.mean(u))
        assert np.mean(u) > 0

    def test_ascending_orthonormal_certified(self, neumann, dirichlet):
        """Test ordering, M-orthonormality and residuals."""
        for spec in (neumann, dirichlet):
            assert np.all(np.diff(spec.eigenvalues) >= 0)
            assert np.allclose(spec.gram(), np.eye(spec.k), atol=1e-8)
            assert np.all(spec.residuals <= 1e-6 * np.maximum(1.0, np.abs(spec.eigenvalues)))

    def test_dirichlet_ground_state(self, dirichlet):
        """Test lambda_1 close to j_{0,1}^2 and eigenvectors zero on the boundary."""
        assert dirichlet.eigenvalues[0] == pytest.approx(J01_SQUARED, rel=2e-2)
        assert dirichlet.eigenvalues[0] > J01_SQUARED
        assert np.all(dirichlet.eigenvectors[: dirichlet.mesh.n_boundary] == 0)

    def test_double_cluster_on_circle(self, neumann):
        """Test that modes 2 and 3 pair up under the matching tolerance."""
        grouped = neumann.regroup(5e-2)
        assert grouped.cluster_of(1).tolist() == [1, 2]
        assert grouped.cluster_of(0).tolist() == [0]

    def test_constraints_raise_eigenvalues(self, unit_circle, neumann, dirichlet):
        """Test Neumann <= partial Dirichlet <= Dirichlet on one mesh."""
        theta_map = build_theta_map("identity", unit_circle, epsilon=0.25)
        cfg = generate_alternation(theta_map, 8, UniformRule(0.2, 0.2), eta=0.2)
        mesh = triangulate(unit_circle, cfg, h=0.1)
        chain = [
            solve_eigs(assemble(tagged), 5, tol=1e-12).eigenvalues
            for tagged in (
                retag(mesh, None),
                mesh,
                with_uniform_tag(mesh, BoundaryTag.DIRICHLET),
            )
        ]
        assert np.all(chain[1] >= chain[0] - 1e-9)
        assert np.all(chain[2] >= chain[1] - 1e-9)

    def test_second_order_convergence(self, unit_circle):
        """Test observed P1 order close to 2 for the Dirichlet ground state."""
        errors, sizes = [], []
        for h in (0.2, 0.1, 0.05):
            mesh = with_uniform_tag(triangulate(unit_circle, None, h=h), BoundaryTag.DIRICHLET)
            errors.append(solve_eigs(assemble(mesh), 1).eigenvalues[0] - J01_SQUARED)
            sizes.append(mesh.n_vertices)
        orders = [
            2 * math.log(errors[i] / errors[i + 1]) / math.log(sizes[i + 1] / sizes[i])
            for i in range(2)
        ]
        assert all(1.7 <= order <= 2.3 for order in orders)

    def test_preconditions(self, mesh):
        """Test k and tolerance ranges."""
        ops = assemble(mesh)
        with pytest.raises(ConfigurationError, match="tolerance"):
            solve_eigs(ops, 2, tol=1e-3)
        with pytest.raises(ConfigurationError, match="free DOFs"):
            solve_eigs(ops, 0)
        with pytest.raises(ConfigurationError, match="free DOFs"):
            solve_eigs(ops, mesh.n_vertices)


class TestClusters:
    """Test relative-gap clustering."""

    def test_groups_close_values(self):
        """Test that near-equal neighbours share a cluster id."""
        ids = cluster_ids(np.array([0.0, 1.0, 1.0 + 1e-9, 2.0]), 1e-6)
        assert ids.tolist() == [0, 1, 1, 2]

    def test_zero_scale(self):
        """Test that values near zero use an absolute gap."""
        ids = cluster_ids(np.array([0.0, 1e-8, 1e-3]), 1e-6)
        assert ids.tolist() == [0, 0, 1]


class TestBoundaryIntegrals:
    """Test boundary trace and flux integrals."""

    def test_constant_trace(self, neumann):
        """Test that the Neumann ground state gives 2 pi / |Omega_h|, about 2."""
        mesh = neumann.mesh
        value = boundary_trace_integral(neumann, None, 0)
        assert value == pytest.approx(2 * math.pi / mesh.area, rel=1e-8)
        assert value == pytest.approx(2.0, rel=2e-2)

    def test_theta_prime_weight(self, unit_circle, neumann):
        """Test that weighting by theta'_0 = 1 on the unit circle changes nothing."""
        theta_map = build_theta_map("identity", unit_circle, epsilon=0.25)
        weighted = boundary_trace_integral(neumann, theta_map.limit_theta_prime, 0)
        assert weighted == pytest.approx(boundary_trace_integral(neumann, None, 0), rel=1e-12)

    def test_rellich_identity(self, unit_circle):
        """Test that the flux integral of a Dirichlet mode is close to 2 lambda."""
        mesh = with_uniform_tag(triangulate(unit_circle, None, h=0.05), BoundaryTag.DIRICHLET)
        spec = solve_eigs(assemble(mesh), 3)
        for mode in range(3):
            flux = normal_derivative_integral(spec, None, mode)
            assert flux == pytest.approx(2 * spec.eigenvalues[mode], rel=2e-2)

    def test_zero_weight(self, dirichlet):
        """Test g = 0 gives 0."""
        assert normal_derivative_integral(dirichlet, lambda s: np.zeros_like(s), 0) == 0.0

    def test_flux_requires_dirichlet(self, neumann):
        """Test that flux recovery rejects a Neumann spectrum."""
        with pytest.raises(ConfigurationError, match="whole boundary"):
            normal_derivative_integral(neumann, None, 0)

    def test_defect_of_identical_spectra(self, neumann):
        """Test that a spectrum has zero defect against itself."""
        assert eigenvector_defect(neumann, neumann, 0) == pytest.approx(0.0, abs=1e-10)
        assert eigenvector_defect(neumann, neumann, 1) == pytest.approx(0.0, abs=1e-10)


class TestExports:
    """Test CSV exports."""

    def test_spectrum_csv(self, neumann, tmp_path):
        """Test one header plus one row per eigenvalue."""
        path = write_spectrum_csv(neumann, tmp_path / "spectrum.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "index,eigenvalue,residual,cluster"
        assert len(lines) == neumann.k + 1

    def test_eigenvector_csv(self, dirichlet, tmp_path):
        """Test one row per vertex and Dirichlet flags on the boundary."""
        path = write_eigenvectors_csv(dirichlet, tmp_path / "vectors.csv")
        lines = path.read_text().splitlines()
        assert len(lines) == dirichlet.mesh.n_vertices + 1
        assert lines[1].split(",")[2] == "1"

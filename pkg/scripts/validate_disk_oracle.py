"""Validation script comparing finite element limit spectra with the Bessel-root oracle."""

from app.config import get_settings
from app.geometry import build_theta_map, circle
from app.homogenized import LimitProblem, disk_oracle, solve_limit
from app.mesh import mesh_quality, triangulate

MESH_SIZES = (0.2, 0.1, 0.05)
MODES = 6


def validate_disk_oracle():
    """Refine the unit disk and watch each limit spectrum approach the oracle."""
    print("🔧 Validating limit spectra on the unit disk")
    print("=" * 50)

    settings = get_settings()
    print(f"📋 Eigensolver backend: {settings.eig_backend.value}")
    print(f"📋 Solver tolerance: {settings.eig_tolerance:.1e}")
    print()

    curve = circle()
    theta_map = build_theta_map("identity", curve, epsilon=0.25)
    problems = [LimitProblem.dirichlet(), LimitProblem.neumann(), LimitProblem.robin(1.0)]

    try:
        for h in MESH_SIZES:
            mesh = triangulate(curve, None, h)
            quality = mesh_quality(mesh)
            print(
                f"🧩 h={h}: {mesh.n_vertices} vertices, "
                f"min angle {quality.min_angle_deg:.1f} degrees"
            )
            for problem in problems:
                spec = solve_limit(problem, mesh, theta_map, MODES)
                exact = disk_oracle(problem, MODES).eigenvalues
                worst = max(abs(spec.eigenvalues - exact) / (1.0 + exact))
                print(f"   {problem.label:<14} worst relative gap {worst:.3e}")
            print()

        print("🎉 Disk oracle validation completed!")

    except Exception as e:
        print(f"❌ Validation failed: {e}")
        import traceback

        traceback.print_exc()


if __name__ == "__main__":
    validate_disk_oracle()

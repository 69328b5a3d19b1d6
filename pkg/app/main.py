"""Command-line entry point for the boundary interchange lab."""

import argparse
import logging
import sys
from pathlib import Path

from dotenv import load_dotenv
from pydantic import ValidationError

from app.boundary_layer import tabulate_cell_integrals, write_cell_table
from app.config import get_settings
from app.errors import (
    CheckViolation,
    ConfigurationError,
    LabError,
    NumericalError,
    exit_code_for,
)
from app.fem import write_spectrum_csv
from app.geometry import CurveKind
from app.harness import (
    StudyConfig,
    StudyDocument,
    emit_report,
    evaluate_point,
    limit_problem,
    load_study,
    run_study,
)
from app.homogenized import disk_oracle, solve_limit, write_oracle_csv
from app.mesh import triangulate

logger = logging.getLogger(__name__)

DEFAULT_ETAS = (0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.5)
CELL_IDENTITY_TOLERANCE = 1e-6


def load_config(path: Path, modes: int | None = None, tol: float | None = None) -> StudyConfig:
    """Read a JSON study document, applying --modes and --tol overrides.

    Raises:
        ConfigurationError: If the file cannot be read
        ValidationError: If the document violates a StudyConfig invariant
    """
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigurationError(f"Could not read config {path}: {e}") from e
    config = StudyConfig.model_validate_json(text)
    updates = {}
    if modes is not None:
        updates["modes"] = modes
    if tol is not None:
        updates["tolerances"] = config.tolerances.model_copy(update={"eig": tol})
    if updates:
        config = StudyConfig.model_validate(config.model_copy(update=updates).model_dump())
    return config


def _require_config(args: argparse.Namespace) -> StudyConfig:
    if args.config is None:
        raise ConfigurationError(f"'{args.verb}' needs --config")
    return load_config(args.config, args.modes, args.tol)


def cmd_solve(args: argparse.Namespace) -> None:
    config = _require_config(args)
    n_arcs = args.n or config.sweep[0]
    print(f"🔧 Solving {config.name} at N={n_arcs} ({config.regime.value})")
    record = evaluate_point(config, n_arcs)
    if not record.ok:
        raise NumericalError(f"Sweep point N={n_arcs} failed: {record.reason}")
    for m in record.modes:
        print(
            f"   mode {m.mode + 1}: lambda_eps={m.lambda_eps:.10g} limit={m.limit:.10g} "
            f"prediction={m.prediction:.10g}"
        )
    document = StudyDocument(config=config, records=[record])
    for path in emit_report(document, args.out):
        print(f"✅ Wrote {path}")


def cmd_homogenize(args: argparse.Namespace) -> None:
    config = _require_config(args)
    epsilon = 2.0 / config.sweep[0]
    curve = config.curve.build()
    theta_map = config.theta.build(curve, epsilon)
    problem = limit_problem(config)
    print(f"🔧 Limit problem {problem.label} on {config.curve.kind.value}")
    mesh = triangulate(curve, None, config.mesh.h, config.mesh.n_min)
    spec = solve_limit(problem, mesh, theta_map, config.modes, config.tolerances.eig)
    args.out.mkdir(parents=True, exist_ok=True)
    print(f"✅ Wrote {write_spectrum_csv(spec, args.out / 'limit_spectrum.csv')}")

    if config.curve.kind == CurveKind.CIRCLE and config.curve.radius == 1.0:
        oracle = disk_oracle(problem, config.modes)
        for i, (fem, exact) in enumerate(zip(spec.eigenvalues, oracle.eigenvalues, strict=True)):
            print(f"   mode {i + 1}: fem={fem:.10g} disk={exact:.10g} gap={fem - exact:+.3e}")
        print(f"✅ Wrote {write_oracle_csv(oracle, args.out / 'disk_oracle.csv')}")


def cmd_layer(args: argparse.Namespace) -> None:
    etas = args.etas or list(DEFAULT_ETAS)
    print(f"🧮 Cell integrals at {len(etas)} values of eta")
    rows = tabulate_cell_integrals(etas)
    args.out.mkdir(parents=True, exist_ok=True)
    print(f"✅ Wrote {write_cell_table(rows, args.out / 'cell_integrals.csv')}")
    worst = max(rows, key=lambda row: row.max_deviation)
    print(f"   largest identity gap {worst.max_deviation:.3e} at eta={worst.eta}")
    if worst.max_deviation > CELL_IDENTITY_TOLERANCE:
        raise CheckViolation(
            f"Cell identities off by {worst.max_deviation:.3e} at eta={worst.eta}",
            details={"eta": worst.eta, "deviation": worst.max_deviation},
        )


def cmd_study(args: argparse.Namespace) -> None:
    config = _require_config(args)
    print(f"🔬 Study {config.name}: {len(config.sweep)} points, {config.modes} modes")
    document = run_study(config, args.jobs)
    for path in emit_report(document, args.out):
        print(f"✅ Wrote {path}")
    if document.failed:
        print(f"⚠️  {len(document.failed)} sweep points failed")
    document.raise_for_violation()


def cmd_report(args: argparse.Namespace) -> None:
    source = args.study or args.out
    document = load_study(source)
    print(f"📝 Re-rendering {document.config.name} from {source}")
    for path in emit_report(document, args.out):
        print(f"✅ Wrote {path}")


COMMANDS = {
    "solve": cmd_solve,
    "homogenize": cmd_homogenize,
    "layer": cmd_layer,
    "study": cmd_study,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boundary-lab",
        description="Eigenvalue asymptotics under frequent Dirichlet/Neumann interchange",
    )
    parser.add_argument("verb", choices=sorted(COMMANDS))
    parser.add_argument("--config", type=Path, help="JSON study document")
    parser.add_argument("--out", type=Path, help="Output directory (settings default)")
    parser.add_argument("--modes", type=int, help="Number of eigenvalues per point")
    parser.add_argument("--jobs", type=int, help="Sweep points evaluated concurrently")
    parser.add_argument("--tol", type=float, help="Eigensolver tolerance")
    parser.add_argument("--n", type=int, help="N for 'solve' (first sweep value by default)")
    parser.add_argument("--etas", type=float, nargs="+", help="eta values for 'layer'")
    parser.add_argument("--study", type=Path, help="study.json (or its directory) for 'report'")
    return parser


def main(argv: list[str] | None = None) -> int:
    """Run one CLI verb and return its exit code."""
    load_dotenv()
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    args = build_parser().parse_args(argv)
    args.out = args.out or settings.output_dir

    # Validate configuration
    try:
        settings.validate_quadrature_config()
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        print(f"❌ {e}", file=sys.stderr)
        return exit_code_for(e)

    logger.info(f"Running '{args.verb}' in {settings.environment.value} mode")
    try:
        COMMANDS[args.verb](args)
    except (LabError, ValidationError) as e:
        code = exit_code_for(e)
        logger.error(f"'{args.verb}' failed with exit code {code}: {e}")
        print(f"❌ {e}", file=sys.stderr)
        return code
    return 0


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()

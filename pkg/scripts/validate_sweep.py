"""Validation script running a short Robin-limit study and printing its fits."""

from pathlib import Path

from app.harness import StudyConfig, emit_report, run_study

STUDY = {
    "name": "robin-validation",
    "regime": "robin_limit",
    "robin_A": 1.0,
    "sweep": [4, 6, 8, 10],
    "eta": {"mode": "from_mu", "mu": 1.0},
    "rule": {"name": "modulated", "params": {"d": 0.8, "amplitude": 0.3}},
    "mesh": {"h": 0.1},
    "modes": 3,
}


def validate_sweep():
    """Run the study, print per-point remainders and the bound reports."""
    print("🔬 Validating a Robin-limit sweep")
    print("=" * 50)

    try:
        config = StudyConfig.model_validate(STUDY)
        document = run_study(config, jobs=2)

        for record in document.records:
            if not record.ok:
                print(f"⚠️  N={record.n_arcs}: {record.reason}")
                continue
            ground = record.modes[0]
            print(
                f"   N={record.n_arcs:<3} eta={record.eta:.3e} lambda_eps={ground.lambda_eps:.8f} "
                f"prediction={ground.prediction:.8f} remainder={ground.norm_remainder:.3e}"
            )
        print()

        for name, fit in document.fits.items():
            print(f"📈 {name}: slope {fit.slope:.3f}, R^2 {fit.r_squared:.3f}")
        for report in document.bounds:
            status = "✅" if report.passed else "❌"
            print(f"{status} {report.family.value} mode {report.mode + 1}")
        print()

        for path in emit_report(document, Path("results") / config.name):
            print(f"📝 Wrote {path}")
        print("🎉 Sweep validation completed!")

    except Exception as e:
        print(f"❌ Validation failed: {e}")
        import traceback

        traceback.print_exc()


if __name__ == "__main__":
    validate_sweep()

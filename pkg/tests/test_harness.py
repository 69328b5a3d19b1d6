"""Tests for study configs, sweeps, checks and reports."""

import csv
import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.asymptotics import BoundFamily
from app.errors import CheckViolation, ConfigurationError, NumericalError
from app.geometry import DriftingRule, ScaledRule, build_theta_map, circle, generate_alternation
from app.harness import (
    EtaRule,
    RecordStatus,
    StudyConfig,
    StudyDocument,
    bound_reports,
    check_monotonicity,
    dirichlet_sandwich,
    emit_report,
    evaluate_point,
    fit_rate,
    load_study,
    mu_slope_check,
    remainder_fits,
    run_study,
    run_sweep,
    run_sweep_async,
    write_results_csv,
)
from app.mesh import triangulate

NEUMANN_STUDY = {
    "name": "neumann-small",
    "regime": "neumann_limit",
    "robin_A": 0.0,
    "sweep": [4, 6, 8],
    "eta": {"mode": "from_mu", "mu": 1.0},
    "rule": {"name": "scaled", "params": {"d": 1.0}},
    "mesh": {"h": 0.2},
    "modes": 3,
}

DIRICHLET_STUDY = {
    "name": "dirichlet-small",
    "regime": "dirichlet_limit",
    "sweep": [4, 8, 16],
    "eta": {"mode": "fixed", "eta": 0.5},
    "rule": {"name": "scaled", "params": {"d": 1.0}},
    "mesh": {"h": 0.2},
    "modes": 2,
}

# Fixed eta = 0.3 on the disk: the log correction approaches 2 lambda_0.
DIRICHLET_CORRECTION_STUDY = {
    "name": "dirichlet-correction",
    "regime": "dirichlet_limit",
    "sweep": [16, 32, 64],
    "eta": {"mode": "fixed", "eta": 0.3},
    "rule": {"name": "scaled", "params": {"d": 1.0}},
    "modes": 1,
}

FIRST_ORDER_STUDY = {
    "name": "first-order",
    "regime": "neumann_limit",
    "sweep": [4, 6, 8],
    "eta": {"mode": "from_mu", "mu": 0.5},
    "rule": {"name": "scaled", "params": {"d": 1.0}},
    "mesh": {"h": 0.1},
    "modes": 1,
}

# A + mu = 5 keeps eta = exp(-N / 10) meshable up to N = 64.
TWO_TERM_STUDY = {
    "name": "two-term",
    "regime": "robin_limit",
    "robin_A": 4.0,
    "sweep": [8, 16, 32, 64],
    "eta": {"mode": "from_mu", "mu": 1.0},
    "rule": {"name": "scaled", "params": {"d": 1.0}},
    "mesh": {"h": 0.1},
    "modes": 1,
}


def _study(base: dict, **changes) -> StudyConfig:
    return StudyConfig.model_validate({**base, **changes})


@pytest.fixture(scope="module")
def neumann_config():
    return _study(NEUMANN_STUDY)


@pytest.fixture(scope="module")
def neumann_records(neumann_config):
    return run_sweep(neumann_config, jobs=1)


@pytest.fixture(scope="module")
def dirichlet_document():
    return run_study(_study(DIRICHLET_STUDY), jobs=1)


@pytest.fixture(scope="module")
def unit_circle():
    return circle()


@pytest.fixture(scope="module")
def theta_map(unit_circle):
    return build_theta_map("identity", unit_circle, epsilon=0.25)


class TestStudyConfig:
    """Test study document validation."""

    def test_valid(self, neumann_config):
        """Test that a Neumann-limit study parses with defaults filled in."""
        assert neumann_config.curve.kind.value == "circle"
        assert neumann_config.tolerances.sign == 1e-8

    @pytest.mark.parametrize(
        ("changes", "message"),
        [
            ({"sweep": [4, 5]}, "even"),
            ({"sweep": [8, 4]}, "strictly increasing"),
            ({"sweep": []}, "at least one"),
            ({"robin_A": 1.0}, "A = 0"),
            ({"eta": {"mode": "fixed", "eta": 0.1}}, "derive eta"),
            ({"rule": {"name": "zigzag"}}, "Unknown arc rule"),
        ],
    )
    def test_invalid(self, changes, message):
        """Test that each invariant violation is reported."""
        with pytest.raises(ValidationError, match=message):
            _study(NEUMANN_STUDY, **changes)

    def test_dirichlet_needs_fixed_eta(self):
        """Test that the Dirichlet regime rejects eta derived from mu."""
        with pytest.raises(ValidationError, match="fixed eta"):
            _study(DIRICHLET_STUDY, eta={"mode": "from_mu", "mu": 1.0})

    def test_dirichlet_eta_range(self):
        """Test that eta above pi/2 is rejected."""
        with pytest.raises(ValidationError, match="pi/2"):
            _study(DIRICHLET_STUDY, eta={"mode": "fixed", "eta": 2.0})

    def test_robin_needs_positive_A(self):
        """Test that the Robin regime needs A > 0."""
        with pytest.raises(ValidationError, match="A > 0"):
            _study(NEUMANN_STUDY, regime="robin_limit")

    def test_eta_from_mu(self):
        """Test eta = exp(-1 / (eps (A + mu)))."""
        rule = EtaRule(mode="from_mu", mu=0.5)
        assert rule.resolve(0.25, 1.5) == pytest.approx(math.exp(-2.0))

    def test_remark14_rule(self):
        """Test that the drifting arc family is selected by its document name."""
        config = _study(NEUMANN_STUDY, rule={"name": "remark14"})
        assert isinstance(config.rule.build(), DriftingRule)

    def test_mesh_grading(self):
        """Test per-study grading overrides and their ranges."""
        config = _study(NEUMANN_STUDY, mesh={"grading_ratio": 1.5, "junction_refinement": 4})
        assert config.mesh.grading_ratio == 1.5
        assert _study(NEUMANN_STUDY).mesh.junction_refinement is None
        with pytest.raises(ValidationError, match="grading_ratio"):
            _study(NEUMANN_STUDY, mesh={"grading_ratio": 1.0})


class TestFitRate:
    """Test log-log rate fits."""

    def test_power_law(self):
        """Test that y = 3 x^2 gives slope 2 and R^2 = 1."""
        fit = fit_rate([1.0, 0.5, 0.25], [3.0, 0.75, 0.1875])
        assert fit.slope == pytest.approx(2.0, abs=1e-10)
        assert fit.r_squared == pytest.approx(1.0)
        assert fit.ratios == pytest.approx([0.25, 0.25])

    def test_too_few_points(self):
        """Test that two points are not enough."""
        with pytest.raises(ConfigurationError, match="at least 3"):
            fit_rate([1.0, 0.5], [1.0, 0.5])

    def test_non_positive(self):
        """Test that a zero error cannot be fitted on a log scale."""
        with pytest.raises(ConfigurationError, match="positive"):
            fit_rate([1.0, 0.5, 0.25], [1.0, 0.0, 0.1])


class TestSweep:
    """Test sweeps toward the Neumann and Dirichlet limits."""

    def test_ordering(self, neumann_records):
        """Test that records come back by decreasing eps."""
        assert [r.n_arcs for r in neumann_records] == [4, 6, 8]
        assert all(r.ok for r in neumann_records)

    def test_record_contents(self, neumann_records):
        """Test point-level quantities and one result per mode."""
        for record in neumann_records:
            assert record.eta == pytest.approx(math.exp(-record.n_arcs / 2))
            assert record.mu == 1.0
            assert record.sigma == pytest.approx(0.0, abs=1e-12)
            assert [m.mode for m in record.modes] == [0, 1, 2]
            for m in record.modes:
                assert math.isfinite(m.norm_remainder)
                assert m.first_order is not None
                assert -1e-9 <= m.defect <= 1.0 + 1e-9

    def test_neumann_sign_law(self, neumann_config, neumann_records):
        """Test that Dirichlet arcs never lower the Neumann eigenvalues."""
        for record in neumann_records:
            for m in record.modes:
                assert m.raw_err >= -1e-9
        reports = bound_reports(neumann_records, neumann_config.regime)
        assert len(reports) == 3
        assert all(r.family == BoundFamily.NEUMANN_LIMIT and r.passed for r in reports)

    @pytest.mark.asyncio
    async def test_async_matches_sync(self, neumann_config, neumann_records):
        """Test that concurrent evaluation gives the same records as sequential."""
        records = await run_sweep_async(neumann_config, jobs=2)
        assert [r.n_arcs for r in records] == [4, 6, 8]
        for a, b in zip(records, neumann_records, strict=True):
            assert [m.lambda_eps for m in a.modes] == pytest.approx(
                [m.lambda_eps for m in b.modes], rel=1e-10
            )

    def test_unresolvable_point(self, neumann_config):
        """Test that an arc below the size floor gives a failed record."""
        record = evaluate_point(neumann_config, 40)
        assert record.status == RecordStatus.FAILED
        assert "size floor" in record.reason
        assert record.modes == []

    def test_all_points_fail(self):
        """Test that a sweep with no resolvable point raises."""
        with pytest.raises(NumericalError, match="All 2 sweep points failed"):
            run_sweep(_study(NEUMANN_STUDY, sweep=[40, 60]), jobs=1)

    def test_dirichlet_sign_law(self, dirichlet_document):
        """Test that arcs never raise eigenvalues above the Dirichlet limit."""
        records = dirichlet_document.records
        for record in records:
            assert all(m.raw_err <= 1e-9 for m in record.modes)
        assert all(r.passed for r in dirichlet_document.bounds)
        assert abs(records[-1].modes[0].raw_err) < abs(records[0].modes[0].raw_err)

    def test_dirichlet_fits(self, dirichlet_document):
        """Test that three points give raw-error and remainder fits per mode."""
        assert set(dirichlet_document.fits) == {
            "mode_1_raw_err",
            "mode_1_norm_remainder",
            "mode_2_raw_err",
            "mode_2_norm_remainder",
        }
        assert dirichlet_document.fits["mode_1_raw_err"].slope > 0

    def test_remainder_fits_skip_short_sweeps(self, neumann_records):
        """Test that fits need three successful points."""
        assert remainder_fits(neumann_records[:2]) == {}


class TestStudyChecks:
    """Test the structural checks attached to a study document."""

    @pytest.fixture(scope="class")
    def neumann_document(self, neumann_config):
        return run_study(neumann_config, jobs=1)

    def test_dirichlet_study(self, dirichlet_document):
        """Test a sandwich report at the coarsest point and no mu-slope."""
        [report] = dirichlet_document.monotonicity
        assert report.labels[0] == "neumann"
        assert report.labels[-1] == "dirichlet"
        assert report.passed
        assert dirichlet_document.slopes == []

    def test_neumann_study(self, neumann_document):
        """Test that a Neumann study carries a passing sandwich and mu-slope check."""
        [monotonicity] = neumann_document.monotonicity
        [slope] = neumann_document.slopes
        assert monotonicity.passed
        assert slope.robin_A == 0.0
        assert slope.tolerance == pytest.approx(0.04)
        assert slope.extrapolated_slope == pytest.approx(2.0, abs=0.04)
        assert slope.passed
        neumann_document.raise_for_violation()

    def test_slope_violation_is_raised(self, neumann_document):
        """Test that a failing mu-slope makes the document raise."""
        [slope] = neumann_document.slopes
        broken = neumann_document.model_copy(
            update={"slopes": [slope.model_copy(update={"extrapolated_slope": 3.0})]}
        )
        with pytest.raises(CheckViolation, match="mu-slope"):
            broken.raise_for_violation()


class TestLimitExpansions:
    """Test sweeps against the expansions of each limiting regime."""

    def test_dirichlet_log_correction(self):
        """Test (lambda_eps - lambda_0) / (eps ln sin eta) approaching 2 lambda_0."""
        records = run_sweep(_study(DIRICHLET_CORRECTION_STUDY), jobs=1)
        assert [r.n_arcs for r in records] == [16, 32, 64]
        gaps = []
        for record in records:
            mode = record.modes[0]
            assert mode.raw_err <= 1e-8
            ratio = mode.raw_err / (record.epsilon * math.log(math.sin(0.3)))
            gaps.append(abs(ratio - 2 * mode.limit) / (2 * mode.limit))
        assert gaps[-1] <= 0.1
        assert gaps[0] > gaps[1] > gaps[2]

    def test_first_order_slope(self):
        """Test (lambda_eps - lambda_0) / mu moving toward the boundary integral 2."""
        records = run_sweep(_study(FIRST_ORDER_STUDY), jobs=1)
        assert all(r.ok for r in records)
        gaps = []
        for record in records:
            mode = record.modes[0]
            assert mode.first_order == pytest.approx(mode.limit + 2 * record.mu, abs=1e-2)
            assert mode.raw_err >= -1e-9
            gaps.append(abs(mode.raw_err / record.mu - 2.0))
        assert gaps[0] > gaps[1] > gaps[2]

    def test_two_term_remainder(self):
        """Test a non-positive second coefficient and a remainder shrinking per halving."""
        records = run_sweep(_study(TWO_TERM_STUDY), jobs=1)
        assert all(r.ok for r in records)
        for record in records:
            mode = record.modes[0]
            assert mode.prediction - mode.base <= 1e-12
        fit = fit_rate(
            [r.epsilon for r in records], [r.modes[0].norm_remainder for r in records]
        )
        assert all(ratio <= 0.7 for ratio in fit.ratios)


class TestMonotonicity:
    """Test eigenvalue monotonicity along nested Dirichlet sets."""

    def _chain(self, theta_map, *ds):
        return [generate_alternation(theta_map, 8, ScaledRule(d=d), 0.5) for d in ds]

    def test_nested_chain(self, unit_circle, theta_map):
        """Test Neumann <= small arcs <= large arcs <= Dirichlet."""
        report = check_monotonicity(unit_circle, self._chain(theta_map, 0.3, 0.6), h=0.2)
        assert report.labels == ["neumann", "scaled #0", "scaled #1", "dirichlet"]
        assert np.asarray(report.eigenvalues).shape == (4, 3)
        assert report.passed
        report.raise_for_violation()

    def test_identical_configs(self, unit_circle, theta_map):
        """Test that a configuration compared with itself gives equal spectra."""
        report = check_monotonicity(unit_circle, self._chain(theta_map, 0.6, 0.6), h=0.2)
        assert report.eigenvalues[1] == pytest.approx(report.eigenvalues[2], rel=1e-8)

    def test_not_nested(self, unit_circle, theta_map):
        """Test that a chain in the wrong order is rejected."""
        with pytest.raises(ConfigurationError, match="not nested"):
            check_monotonicity(unit_circle, self._chain(theta_map, 0.6, 0.3), h=0.2)

    def test_sandwich(self, unit_circle, theta_map):
        """Test the image-uniform inner family below a scaled outer one."""
        outer = self._chain(theta_map, 0.6)[0]
        report = dirichlet_sandwich(unit_circle, theta_map, outer, h=0.2)
        assert report.passed
        assert len(report.eigenvalues) == 4

    def test_violation_raises(self, unit_circle, theta_map):
        """Test that a reported decrease raises CheckViolation."""
        report = check_monotonicity(unit_circle, self._chain(theta_map, 0.3), h=0.2)
        broken = report.model_copy(update={"max_decrease": 1.0})
        with pytest.raises(CheckViolation, match="decrease"):
            broken.raise_for_violation()


class TestMuSlope:
    """Test the finite-difference mu-slope against the boundary integral."""

    @pytest.fixture(scope="class")
    def mesh(self, unit_circle):
        return triangulate(unit_circle, None, h=0.1)

    def test_neumann_slope(self, mesh, theta_map):
        """Test slope 2 on the unit disk with a quadratic symmetric remainder."""
        mus = [-0.04, -0.02, -0.01, 0.01, 0.02, 0.04]
        report = mu_slope_check(mesh, theta_map, 0.0, mus, tol=5e-3)
        assert report.passed
        assert report.extrapolated_slope == pytest.approx(2.0, rel=1e-2)
        assert report.mus == sorted(mus + [0.0])
        assert report.remainder_fit is not None
        assert report.remainder_fit.slope == pytest.approx(2.0, abs=0.15)

    def test_robin_slope(self, mesh, theta_map):
        """Test the slope of the Robin(0.5) ground state without a remainder fit."""
        report = mu_slope_check(mesh, theta_map, 0.5, [-0.02, -0.01, 0.01, 0.02], tol=5e-3)
        assert report.passed
        assert report.remainder_fit is None

    def test_asymmetric_steps(self, mesh, theta_map):
        """Test that steps without their negatives are rejected."""
        with pytest.raises(ConfigurationError, match="symmetric"):
            mu_slope_check(mesh, theta_map, 0.0, [-0.01, 0.01, 0.02])


class TestReport:
    """Test results.csv, study.json and the convergence plot."""

    def _document(self, neumann_config, neumann_records):
        failed = evaluate_point(neumann_config, 40)
        return StudyDocument(config=neumann_config, records=[*neumann_records, failed])

    def test_files(self, neumann_config, neumann_records, tmp_path):
        """Test the CSV layout, including the failed row."""
        paths = emit_report(self._document(neumann_config, neumann_records), tmp_path)
        assert [p.name for p in paths] == ["results.csv", "study.json", "convergence.svg"]
        with (tmp_path / "results.csv").open(newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0][:3] == ["N", "eps", "eta"]
        assert rows[0][-1] == "status"
        assert len(rows) == 1 + 3 * 3 + 1
        assert rows[1][6] == "1"
        assert float(rows[1][1]) == pytest.approx(0.5)
        failed = rows[-1]
        assert failed[0] == "40"
        assert failed[-1] == "failed"
        assert all(cell == "" for cell in failed[2:-1])

    def test_results_csv_from_string_path(self, neumann_records, tmp_path):
        """Test that the CSV writer accepts a plain string path."""
        path = write_results_csv(neumann_records, str(tmp_path / "plain.csv"))
        assert path == tmp_path / "plain.csv"
        assert len(path.read_text().splitlines()) == 1 + 3 * 3

    def test_deterministic(self, neumann_config, neumann_records, tmp_path):
        """Test that one document renders to byte-identical files."""
        document = self._document(neumann_config, neumann_records)
        first = emit_report(document, tmp_path / "a")
        second = emit_report(document, tmp_path / "b")
        for a, b in zip(first, second, strict=True):
            assert a.read_bytes() == b.read_bytes()

    def test_load_study(self, neumann_config, neumann_records, tmp_path):
        """Test that study.json reloads to the same document."""
        document = self._document(neumann_config, neumann_records)
        emit_report(document, tmp_path)
        loaded = load_study(tmp_path)
        assert loaded.model_dump() == document.model_dump()
        assert len(loaded.failed) == 1

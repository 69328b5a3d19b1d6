"""Tests for the command-line verbs and their exit codes."""

import json
from unittest.mock import patch

import pytest

from app.asymptotics import BoundFamily, BoundReport
from app.config import Settings
from app.harness import RecordStatus, SlopeReport, StudyConfig, StudyDocument, StudyRecord
from app.main import load_config, main

STUDY = {
    "name": "cli-neumann",
    "regime": "neumann_limit",
    "sweep": [4, 6],
    "eta": {"mode": "from_mu", "mu": 1.0},
    "mesh": {"h": 0.2},
    "modes": 3,
}


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "study.config.json"
    path.write_text(json.dumps(STUDY))
    return path


def _violating_document() -> StudyDocument:
    return StudyDocument(
        config=StudyConfig.model_validate(STUDY),
        records=[],
        bounds=[
            BoundReport(
                family=BoundFamily.NEUMANN_LIMIT,
                mode=0,
                n_samples=2,
                tolerance=1e-8,
                sign_violation=0.1,
            )
        ],
    )


class TestLoadConfig:
    """Test reading study documents with CLI overrides."""

    def test_overrides(self, config_path):
        """Test that --modes and --tol replace the document values."""
        config = load_config(config_path, modes=5, tol=1e-9)
        assert config.modes == 5
        assert config.tolerances.eig == 1e-9

    def test_missing_file(self, tmp_path):
        """Test that an unreadable config is a configuration error."""
        assert main(["study", "--config", str(tmp_path / "missing.json")]) == 2


class TestVerbs:
    """Test each verb end to end."""

    def test_invalid_config(self, tmp_path):
        """Test that an odd N exits with code 2."""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({**STUDY, "sweep": [5]}))
        assert main(["study", "--config", str(path), "--out", str(tmp_path)]) == 2

    def test_missing_config_flag(self, tmp_path):
        """Test that verbs needing a study document refuse to run without one."""
        assert main(["solve", "--out", str(tmp_path)]) == 2

    def test_layer(self, tmp_path):
        """Test the cell-integral table."""
        assert main(["layer", "--etas", "0.5", "1.0", "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "cell_integrals.csv").read_text().splitlines()
        assert lines[0] == "eta,I_flux,I_trace,grad_norm"
        assert len(lines) == 3

    def test_homogenize(self, config_path, tmp_path):
        """Test the limit spectrum next to the disk oracle."""
        out = tmp_path / "limit"
        assert main(["homogenize", "--config", str(config_path), "--out", str(out)]) == 0
        assert (out / "limit_spectrum.csv").exists()
        assert (out / "disk_oracle.csv").exists()

    def test_solve(self, config_path, tmp_path):
        """Test a single sweep point."""
        out = tmp_path / "solve"
        assert main(["solve", "--config", str(config_path), "--n", "6", "--out", str(out)]) == 0
        rows = (out / "results.csv").read_text().splitlines()
        assert len(rows) == 1 + 3
        assert rows[1].startswith("6,")

    @patch("app.main.evaluate_point")
    def test_solve_failed_point(self, mock_evaluate, config_path, tmp_path):
        """Test that an unresolvable point exits with code 3."""
        mock_evaluate.return_value = StudyRecord(
            n_arcs=4,
            epsilon=0.5,
            robin_A=0.0,
            h=0.2,
            status=RecordStatus.FAILED,
            reason="below the size floor",
        )
        assert main(["solve", "--config", str(config_path), "--out", str(tmp_path)]) == 3

    @patch("app.main.run_study")
    def test_study_violation(self, mock_run_study, config_path, tmp_path):
        """Test that a sign violation exits with code 4 after writing the report."""
        mock_run_study.return_value = _violating_document()
        assert main(["study", "--config", str(config_path), "--out", str(tmp_path)]) == 4
        assert (tmp_path / "study.json").exists()

    def test_repeated_study_is_byte_identical(self, config_path, tmp_path):
        """Test that two full study runs from one config write identical files."""
        runs = [tmp_path / "run1", tmp_path / "run2"]
        for out, jobs in zip(runs, ("1", "2"), strict=True):
            argv = ["study", "--config", str(config_path), "--out", str(out), "--jobs", jobs]
            assert main(argv) == 0
        for name in ("results.csv", "study.json", "convergence.svg"):
            assert (runs[0] / name).read_bytes() == (runs[1] / name).read_bytes()
        document = json.loads((runs[0] / "study.json").read_text())
        assert len(document["monotonicity"]) == 1
        assert len(document["slopes"]) == 1

    @patch("app.harness.study.mu_slope_check")
    def test_slope_violation(self, mock_slope_check, config_path, tmp_path):
        """Test that a failing mu-slope check in a real study exits with code 4."""
        mock_slope_check.return_value = SlopeReport(
            mode=0,
            robin_A=0.0,
            mus=[-0.01, 0.0, 0.01],
            values=[-0.02, 0.0, 0.02],
            central_slopes=[2.0],
            extrapolated_slope=2.5,
            analytic_slope=2.0,
            tolerance=1e-3,
        )
        assert main(["study", "--config", str(config_path), "--out", str(tmp_path)]) == 4
        assert (tmp_path / "results.csv").exists()

    @patch("app.main.run_study")
    def test_report(self, mock_run_study, config_path, tmp_path):
        """Test that report re-renders study.json into identical files."""
        mock_run_study.return_value = StudyDocument(
            config=StudyConfig.model_validate(STUDY), records=[]
        )
        first = tmp_path / "first"
        second = tmp_path / "second"
        assert main(["study", "--config", str(config_path), "--out", str(first)]) == 0
        assert main(["report", "--study", str(first), "--out", str(second)]) == 0
        assert (first / "results.csv").read_bytes() == (second / "results.csv").read_bytes()
        assert (first / "study.json").read_bytes() == (second / "study.json").read_bytes()

    def test_unsupported_quadrature_order(self, tmp_path):
        """Test that an invalid quadrature setting stops every verb with code 2."""
        with patch("app.main.get_settings") as mock_settings:
            mock_settings.return_value = Settings(quadrature_order=3)
            assert main(["layer", "--etas", "1.0", "--out", str(tmp_path)]) == 2
        assert not (tmp_path / "cell_integrals.csv").exists()

    def test_default_output_dir(self, tmp_path):
        """Test that --out falls back to the configured output directory."""
        with patch("app.main.get_settings") as mock_settings:
            mock_settings.return_value = Settings(output_dir=tmp_path / "default")
            assert main(["layer", "--etas", "1.0"]) == 0
        assert (tmp_path / "default" / "cell_integrals.csv").exists()

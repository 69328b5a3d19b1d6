"""Study outputs: results CSV, study JSON and a convergence plot, all deterministic."""

import csv
import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

from matplotlib.figure import Figure  # noqa: E402

from app.errors import LabError  # noqa: E402

from .models import StudyDocument, StudyRecord  # noqa: E402

logger = logging.getLogger(__name__)

RESULTS_CSV = "results.csv"
STUDY_JSON = "study.json"
CONVERGENCE_SVG = "convergence.svg"

CSV_COLUMNS = [
    "N",
    "eps",
    "eta",
    "mu",
    "A",
    "sigma",
    "mode",
    "lambda_eps",
    "base",
    "prediction",
    "raw_err",
    "norm_remainder",
    "residual",
    "status",
]

SVG_RC = {"svg.hashsalt": "boundary-lab", "svg.fonttype": "none"}


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.12e}"


def _rows(records: list[StudyRecord]) -> list[list[str]]:
    rows = []
    for r in records:
        head = [str(r.n_arcs), _fmt(r.epsilon)]
        if not r.ok:
            rows.append(head + [""] * (len(CSV_COLUMNS) - 3) + [r.status.value])
            continue
        point = [_fmt(r.eta), _fmt(r.mu), _fmt(r.robin_A), _fmt(r.sigma)]
        for m in r.modes:
            rows.append(
                head
                + point
                + [
                    str(m.mode + 1),
                    _fmt(m.lambda_eps),
                    _fmt(m.base),
                    _fmt(m.prediction),
                    _fmt(m.raw_err),
                    _fmt(m.norm_remainder),
                    _fmt(m.residual),
                    r.status.value,
                ]
            )
    return rows


def write_results_csv(records: list[StudyRecord], path: Path | str) -> Path:
    """One row per (N, mode); failed points keep N and eps only."""
    path = Path(path)
    with path.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        writer.writerows(_rows(records))
    return path


def plot_convergence(document: StudyDocument, path: Path) -> Path:
    """Log-log |lambda_eps - lambda_0| and the normalized remainder against eps."""
    ok = [r for r in document.records if r.ok]
    fig = Figure(figsize=(7, 4.5))
    ax = fig.subplots()
    if ok:
        eps = [r.epsilon for r in ok]
        for mode in range(len(ok[0].modes)):
            raw = [abs(r.modes[mode].raw_err) for r in ok]
            rem = [r.modes[mode].norm_remainder for r in ok]
            ax.loglog(eps, raw, "o-", label=f"|raw err| mode {mode + 1}")
            ax.loglog(eps, rem, "s--", label=f"remainder mode {mode + 1}")
        ax.legend(fontsize=8)
    ax.set_xlabel("eps")
    ax.set_ylabel("error")
    ax.set_title(f"{document.config.name} ({document.config.regime.value})")
    ax.grid(True, which="both", alpha=0.3)
    with matplotlib.rc_context(SVG_RC):
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def emit_report(document: StudyDocument, out_dir: Path) -> list[Path]:
    """Write results.csv, study.json and convergence.svg into `out_dir`.

    Identical documents give byte-identical files.

    Raises:
        LabError: If the directory or a file cannot be written
    """
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = [
            write_results_csv(document.records, out_dir / RESULTS_CSV),
            out_dir / STUDY_JSON,
            plot_convergence(document, out_dir / CONVERGENCE_SVG),
        ]
        paths[1].write_text(document.model_dump_json(indent=2) + "\n")
    except OSError as e:
        raise LabError(f"Could not write report into {out_dir}: {e}") from e
    logger.info(f"📝 Report for '{document.config.name}' written to {out_dir}")
    return paths


def load_study(path: Path) -> StudyDocument:
    """Read a study.json written by emit_report (or a directory containing one).

    Raises:
        LabError: If the file cannot be read
    """
    path = path / STUDY_JSON if path.is_dir() else path
    try:
        text = path.read_text()
    except OSError as e:
        raise LabError(f"Could not read study document {path}: {e}") from e
    return StudyDocument.model_validate_json(text)

"""End-to-end report: stats -> network -> pairs -> fit, one directory per run.

Every artifact is deterministic for fixed inputs and flags; the run
timestamp appears only in the directory name, never inside a file, so two
runs over the same corpus diff clean.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import figures
from .annotation import AnnotatedPost
from .cooccurrence import build_cooccurrence, compute_node_stats, export_matrix, export_network, matrix_to_network
from .diststats import emotion_frequency, pair_count_histogram, write_frequency_tsv, write_histogram_tsv
from .logit import FitConfig, fit_logistic, significant_pairs, write_results_csv
from .pairfeat import build_design_matrix, build_vocabulary, default_min_support


@dataclass
class ReportOptions:
    include_neutral: bool = False
    count_mode: str = "distinct"
    unit: str = "sentence"
    matrix_order: str = "sentiment"
    min_support: int | None = None
    ordered_pairs: bool = False
    fit: FitConfig = field(default_factory=FitConfig)
    render_figures: bool = True

    def to_json(self) -> dict:
        return {
            "include_neutral": self.include_neutral,
            "count_mode": self.count_mode,
            "unit": self.unit,
            "matrix_order": self.matrix_order,
            "min_support": self.min_support,
            "ordered_pairs": self.ordered_pairs,
            "max_iterations": self.fit.max_iterations,
            "tolerance": self.fit.tolerance,
            "ridge": self.fit.ridge,
            "alpha": self.fit.alpha,
            "correction": self.fit.correction,
        }


ARTIFACTS = (
    "frequency.tsv",
    "pair_histogram.tsv",
    "cooccurrence.csv",
    "network.graphml",
    "results.csv",
    "run_metadata.json",
)

FIGURES = (
    "cdf_ccdf.png",
    "pairs_per_post.png",
    "network.png",
    "cooccurrence_matrix.png",
)


def run_directory(base, label: str | None = None) -> Path:
    """Create ``<base>/run-<stamp>/`` (or ``run-<label>`` when given)."""
    stamp = label or datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%fZ")
    path = Path(base) / f"run-{stamp}"
    path.mkdir(parents=True, exist_ok=False)
    return path


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_report(
    annotated: list[AnnotatedPost],
    out_dir: Path,
    options: ReportOptions | None = None,
    *,
    input_path=None,
) -> dict:
    """Write all report artifacts into ``out_dir``; returns the metadata."""
    options = options or ReportOptions()
    out_dir = Path(out_dir)

    summary = emotion_frequency(
        annotated, unit=options.unit, include_neutral=options.include_neutral
    )
    write_frequency_tsv(summary, out_dir / "frequency.tsv")

    histogram = pair_count_histogram(annotated, include_neutral=options.include_neutral)
    write_histogram_tsv(histogram, out_dir / "pair_histogram.tsv")

    matrix = build_cooccurrence(
        annotated, include_neutral=options.include_neutral, count_mode=options.count_mode
    )
    export_matrix(matrix, out_dir / "cooccurrence.csv", order=options.matrix_order)
    stats = compute_node_stats(annotated, include_neutral=options.include_neutral)
    network = matrix_to_network(matrix, stats)
    export_network(network, "graphml", out_dir / "network.graphml")

    min_support = options.min_support
    if min_support is None:
        min_support = default_min_support(len(annotated))
    vocabulary = build_vocabulary(
        annotated,
        min_support,
        include_neutral=options.include_neutral,
        ordered=options.ordered_pairs,
    )
    design = build_design_matrix(annotated, vocabulary, include_neutral=options.include_neutral)
    fit = fit_logistic(design, options.fit)
    write_results_csv(fit, vocabulary, out_dir / "results.csv")
    significant = significant_pairs(fit, vocabulary)

    if options.render_figures:
        figures.plot_cdf_ccdf(summary, out_dir / "cdf_ccdf.png")
        figures.plot_pair_histogram(histogram, out_dir / "pairs_per_post.png")
        figures.plot_network(network, out_dir / "network.png")
        figures.plot_cooccurrence_heatmap(matrix, out_dir / "cooccurrence_matrix.png")

    metadata = {
        "config": options.to_json(),
        "post_count": len(annotated),
        "outcome_positive": int(design.y.sum()),
        "vocabulary_size": len(vocabulary),
        "min_support": min_support,
        "iterations": fit.iterations,
        "log_likelihood": fit.log_likelihood,
        "converged": fit.converged,
        "separation_flag": fit.separation_flag,
        "significant_pairs": [f"{row.pair[0]}-{row.pair[1]}" for row in significant],
        "artifacts": sorted(ARTIFACTS + FIGURES) if options.render_figures else sorted(ARTIFACTS),
    }
    if input_path is not None:
        metadata["input"] = {"path": str(input_path), "sha256": _sha256(input_path)}
    with open(out_dir / "run_metadata.json", "w", encoding="utf-8") as fh:
        json.dump(metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return metadata

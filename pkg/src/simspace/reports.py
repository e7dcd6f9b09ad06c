"""CSV writers for scree tables, correlation reports and regression reports."""

from __future__ import annotations

import csv

from .data import _fmt
from .errors import IoError


def _open_writer(path):
    try:
        return open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def write_scree_csv(entries, path) -> None:
    """Scree table: one row per dimensionality of a sweep."""
    with _open_writer(path) as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["dims", "metric_stress", "nonmetric_stress", "best_restart", "iterations"]
        )
        for entry in entries:
            best = entry.result.best_restart
            writer.writerow(
                [
                    entry.dims,
                    _fmt(entry.metric_stress),
                    _fmt(entry.nonmetric_stress),
                    best,
                    entry.result.iterations_used[best],
                ]
            )


def write_correlation_csv(reports, path) -> None:
    """One row per (distance metric, weighting) combination."""
    with _open_writer(path) as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "weighted", "pearson_r", "spearman_rho", "n_pairs"])
        for report in reports:
            writer.writerow(
                [
                    report.metric,
                    str(report.weighted).lower(),
                    _fmt(report.pearson_r),
                    _fmt(report.spearman_rho),
                    report.n_pairs,
                ]
            )


def write_regression_report_csv(reports, path) -> None:
    """Rows mirroring the experiment tables, one per evaluation."""
    with _open_writer(path) as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "regressor",
                "feature_space",
                "target_space",
                "shuffled",
                "beta",
                "mse_test",
                "med_test",
                "r2_test",
                "overfit_mse",
                "overfit_med",
                "overfit_r2",
            ]
        )
        for report in reports:
            writer.writerow(
                [
                    report.regressor,
                    report.feature_space,
                    report.target_space,
                    str(report.shuffled).lower(),
                    "" if report.beta is None else _fmt(report.beta),
                    _fmt(report.test.mse),
                    _fmt(report.test.med),
                    _fmt(report.test.r_squared),
                    _fmt(report.overfit_mse),
                    _fmt(report.overfit_med),
                    _fmt(report.overfit_r2),
                ]
            )

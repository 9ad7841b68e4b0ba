"""
Report persistence.

JSON reports carry every outcome, the effective configuration and the
aggregates, and read back into an identical RunReport. CSV reports write one
row per outcome plus a separate aggregates file next to it.
"""

import os
from typing import Literal

import pandas as pd
from pydantic import ValidationError
from wasabi import msg

from ..core.errors import ReportWriteError
from .metrics import RunReport

ReportFormat = Literal["json", "csv"]

OUTCOME_COLUMNS = ["sample_id", "status", "pert_rate", "similarity", "queries_used"]
CSV_FLOAT_FORMAT = "%.6f"


def aggregates_path(path: str) -> str:
    """Where the aggregates of a CSV report go: `run.csv` -> `run.aggregates.csv`."""
    stem, ext = os.path.splitext(path)
    return f"{stem}.aggregates{ext or '.csv'}"


def _write_text(path: str, content: str) -> None:
    try:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(content)
    except OSError as e:
        raise ReportWriteError(f"cannot write {path}: {e}") from e


def write_frame(frame: pd.DataFrame, path: str) -> None:
    """Write a table as UTF-8 CSV with fixed six-decimal floats."""
    _write_text(path, frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT))


def write_report(report: RunReport, path: str, format: ReportFormat = "json") -> None:
    """
    Persist a report.

    Raises:
        ReportWriteError: If the file cannot be written.
        ValueError: On an unknown format.
    """
    if format == "json":
        _write_text(path, report.model_dump_json(indent=2))
    elif format == "csv":
        outcomes = pd.DataFrame.from_records(
            [{c: o.to_dict()[c] for c in OUTCOME_COLUMNS} for o in report.outcomes],
            columns=OUTCOME_COLUMNS,
        )
        write_frame(outcomes, path)
        write_frame(pd.DataFrame.from_records([report.aggregates()]), aggregates_path(path))
    else:
        raise ValueError(f"unknown report format {format!r}")
    msg.good(f"Report written to {path}")


def read_report(path: str) -> RunReport:
    """Load a JSON report written by write_report."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            content = f.read()
    except OSError as e:
        raise ReportWriteError(f"cannot read {path}: {e}") from e
    try:
        return RunReport.model_validate_json(content)
    except ValidationError as e:
        msg.fail(f"{path} is not a valid report")
        raise e

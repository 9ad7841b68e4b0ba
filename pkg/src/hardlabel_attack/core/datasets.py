"""
Labelled dataset files: loading, validation and reproducible sampling.
"""

import os
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator
from wasabi import msg

from .errors import DatasetFormatError


def default_data_dir() -> str:
    """Bundled data directory at the repository root."""
    return os.path.join(os.path.dirname(__file__), "..", "..", "..", "data")


def bundled_path(filename: str) -> str:
    return os.path.normpath(os.path.join(default_data_dir(), filename))


class DatasetRow(BaseModel):
    label: int = Field(ge=0)
    text: str

    @field_validator("text")
    @classmethod
    def _non_empty(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("empty text")
        return value.strip()


class DatasetFile(BaseModel):
    """Rows of (label, text) read from a delimiter-separated file."""

    source: str
    rows: list[DatasetRow]

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def labels(self) -> set[int]:
        return {row.label for row in self.rows}


def load_dataset(path: str, delimiter: str = "\t") -> DatasetFile:
    """
    Load a dataset file whose first column is an integer label and whose
    remaining text (delimiters included) is the sample.

    Args:
        path: File to read.
        delimiter: Column separator. Only the first occurrence splits.

    Returns:
        DatasetFile with every row validated.

    Raises:
        DatasetFormatError: On a bad label, a missing text column or empty text.
    """
    rows: list[DatasetRow] = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue

            label_part, sep, text_part = line.partition(delimiter)
            try:
                label = int(label_part.strip())
            except ValueError:
                if not rows and line_no == 1:
                    msg.warn(f"Skipping header row in {path}: {line[:60]!r}")
                    continue
                raise DatasetFormatError(line_no, f"label {label_part!r} is not an integer")

            if not sep or not text_part.strip():
                raise DatasetFormatError(line_no, "row has no text")
            if label < 0:
                raise DatasetFormatError(line_no, "labels must be non-negative")

            rows.append(DatasetRow(label=label, text=text_part))

    msg.info(f"Loaded {len(rows)} rows from {path}")
    return DatasetFile(source=str(path), rows=rows)


def sample_rows(
    dataset: DatasetFile, count: Optional[int], seed: int
) -> list[tuple[int, DatasetRow]]:
    """
    Draw `count` rows without replacement using the run seed.

    Returns (row index, row) pairs ordered by row index, so the same seed
    always selects and orders the same texts. `None` or a count at least the
    dataset size returns every row.
    """
    indices = list(range(len(dataset.rows)))
    if count is not None and count < len(indices):
        rng = np.random.default_rng([seed, len(indices)])
        indices = sorted(int(i) for i in rng.choice(len(indices), size=count, replace=False))
    return [(i, dataset.rows[i]) for i in indices]

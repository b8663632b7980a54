"""Dataset container, CSV ingestion, and min-max normalization."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._validation import check_matrix


class DataError(ValueError):
    """Raised when an input file or dataset does not meet the expected format."""


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Dataset:
    """An n x d numeric feature matrix with optional per-point class labels.

    Attributes:
        X: float64 array of shape (n, d); every entry is finite.
        feature_names: one name per feature column.
        labels: optional int64 array of dense class codes 0..L-1.
        label_names: original label values (first-appearance order), one per code.
    """

    X: np.ndarray
    feature_names: tuple[str, ...]
    labels: np.ndarray | None = None
    label_names: tuple[str, ...] | None = None

    def __post_init__(self):
        X = check_matrix(self.X, name="X")
        object.__setattr__(self, "X", _readonly(X))
        names = tuple(str(f) for f in self.feature_names)
        if len(names) != self.d:
            raise ValueError(f"got {len(names)} feature names for {self.d} features")
        object.__setattr__(self, "feature_names", names)
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != (self.n,):
                raise ValueError(f"labels have shape {labels.shape}, expected ({self.n},)")
            if labels.min() < 0:
                raise ValueError("label codes must be non-negative")
            object.__setattr__(self, "labels", _readonly(labels))
            if self.label_names is not None:
                object.__setattr__(self, "label_names", tuple(str(s) for s in self.label_names))
        elif self.label_names is not None:
            raise ValueError("label_names given without labels")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def with_X(self, X: np.ndarray) -> "Dataset":
        """Copy of this dataset with the feature matrix replaced."""
        return Dataset(X, self.feature_names, self.labels, self.label_names)


def encode_labels(values) -> tuple[np.ndarray, tuple[str, ...]]:
    """Densely re-encode label values to 0..L-1 preserving first-appearance order."""
    codes = np.empty(len(values), dtype=np.int64)
    seen: dict[str, int] = {}
    for i, v in enumerate(values):
        key = str(v)
        if key not in seen:
            seen[key] = len(seen)
        codes[i] = seen[key]
    return codes, tuple(seen)


def _parse_cell(text: str, row: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataError(
            f"non-numeric cell {text!r} at data row {row}, column {column!r}"
        ) from None
    if not math.isfinite(value):
        raise DataError(f"non-finite cell {text!r} at data row {row}, column {column!r}")
    return value


def load_dataset(path, label_column: str | None = None) -> Dataset:
    """Load a CSV file (header row required) into a Dataset.

    All columns except ``label_column`` must parse as finite numbers. Labels
    are re-encoded to dense codes 0..L-1 in first-appearance order.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: file is empty, expected a header row") from None
        header = [h.strip() for h in header]
        if label_column is not None and label_column not in header:
            raise DataError(
                f"{path}: label column {label_column!r} not found in header {header}"
            )
        label_idx = header.index(label_column) if label_column is not None else None
        feature_names = [h for i, h in enumerate(header) if i != label_idx]
        if not feature_names:
            raise DataError(f"{path}: no feature columns besides the label column")
        rows: list[list[float]] = []
        raw_labels: list[str] = []
        for r, record in enumerate(reader):
            if not record or all(not c.strip() for c in record):
                continue
            if len(record) != len(header):
                raise DataError(
                    f"{path}: data row {r} has {len(record)} cells, expected {len(header)}"
                )
            values = []
            for i, cell in enumerate(record):
                if i == label_idx:
                    raw_labels.append(cell.strip())
                else:
                    values.append(_parse_cell(cell.strip(), r, header[i]))
            rows.append(values)
    if not rows:
        raise DataError(f"{path}: no data rows")
    X = np.array(rows, dtype=np.float64)
    labels = label_names = None
    if label_idx is not None:
        labels, label_names = encode_labels(raw_labels)
    return Dataset(X, tuple(feature_names), labels, label_names)


def save_dataset(ds: Dataset, path) -> None:
    """Write a Dataset as CSV in the schema load_dataset reads (label column last)."""
    path = Path(path)
    header = list(ds.feature_names)
    if ds.labels is not None:
        header.append("label")
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(ds.n):
            row = [repr(float(v)) for v in ds.X[i]]
            if ds.labels is not None:
                name = (
                    ds.label_names[ds.labels[i]]
                    if ds.label_names is not None
                    else str(int(ds.labels[i]))
                )
                row.append(name)
            writer.writerow(row)


def normalize_minmax(ds: Dataset) -> Dataset:
    """Affinely map every feature to [0, 1]; constant features map to all zeros.

    Idempotent: applying it twice gives the same matrix bit for bit.
    """
    X = ds.X
    lo = X.min(axis=0)
    hi = X.max(axis=0)
    span = hi - lo
    out = np.zeros_like(X)
    nz = span > 0
    out[:, nz] = (X[:, nz] - lo[nz]) / span[nz]
    return ds.with_X(out)

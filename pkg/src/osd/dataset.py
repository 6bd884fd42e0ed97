"""Point-set loading, validation and normalization.

A Dataset is an immutable snapshot of N points in R^d.  Row order is the
object identity: nothing in the package ever reorders rows, so scores,
labels and transformed positions stay aligned by index.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError

__all__ = ["Dataset", "Labels", "load_csv", "min_max_normalize"]


@dataclass(frozen=True)
class Dataset:
    """N points in R^d, stored as a read-only (N, d) float64 array."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise DataError(f"points must be a 2-d array, got shape {pts.shape}")
        if pts.shape[0] < 2:
            raise DataError("a dataset needs at least 2 objects")
        if not np.all(np.isfinite(pts)):
            bad = np.argwhere(~np.isfinite(pts))[0]
            raise DataError(f"non-finite value at row {bad[0]}, column {bad[1]}")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def count(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def diameter(self) -> float:
        """Length of the bounding-box diagonal (0 for coincident points)."""
        span = self.points.max(axis=0) - self.points.min(axis=0)
        return float(np.sqrt(np.sum(span * span)))


@dataclass(frozen=True)
class Labels:
    """Binary outlier marks aligned to dataset rows (1 = outlier)."""

    flags: np.ndarray

    def __post_init__(self) -> None:
        flags = np.asarray(self.flags)
        if flags.ndim != 1:
            raise DataError(f"labels must be 1-d, got shape {flags.shape}")
        if not np.all(np.isin(flags, (0, 1))):
            raise DataError("labels must contain only 0 and 1")
        flags = flags.astype(np.int8)
        flags.setflags(write=False)
        object.__setattr__(self, "flags", flags)

    @property
    def count(self) -> int:
        return self.flags.shape[0]

    @property
    def n_outliers(self) -> int:
        return int(self.flags.sum())


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def load_csv(
    path: str | Path, label_column: str | int | None = None
) -> tuple[Dataset, Labels | None]:
    """Load a comma-separated point set, optionally splitting off a label column.

    A header row is assumed present iff the first row contains any
    non-numeric cell.  ``label_column`` selects labels by header name or by
    0-based column index; selecting by name requires a header.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")

    with path.open(newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise DataError(f"empty file: {path}")

    header: list[str] | None = None
    if any(not _is_number(cell) for cell in rows[0]):
        header = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
        if not rows:
            raise DataError(f"no data rows in {path}")

    width = len(rows[0])
    label_idx: int | None = None
    if label_column is not None:
        if isinstance(label_column, str) and not _is_number(label_column):
            if header is None:
                raise DataError(
                    f"label column {label_column!r} requested but file has no header"
                )
            if label_column not in header:
                raise DataError(f"label column {label_column!r} not found in header")
            label_idx = header.index(label_column)
        else:
            label_idx = int(label_column)
            if not 0 <= label_idx < width:
                raise DataError(f"label column index {label_idx} out of range")

    values = np.empty((len(rows), width), dtype=np.float64)
    for r, row in enumerate(rows):
        if len(row) != width:
            raise DataError(
                f"ragged row {r + (2 if header else 1)}: "
                f"expected {width} cells, got {len(row)}"
            )
        for c, cell in enumerate(row):
            try:
                values[r, c] = float(cell)
            except ValueError:
                raise DataError(
                    f"non-numeric cell {cell!r} at row "
                    f"{r + (2 if header else 1)}, column {c + 1}"
                ) from None

    if label_idx is None:
        return Dataset(values), None

    raw = values[:, label_idx]
    if not np.all(np.isin(raw, (0.0, 1.0))):
        bad = int(np.argwhere(~np.isin(raw, (0.0, 1.0)))[0][0])
        raise DataError(
            f"label value {raw[bad]!r} at row {bad + (2 if header else 1)} "
            "is not 0 or 1"
        )
    feats = np.delete(values, label_idx, axis=1)
    return Dataset(feats), Labels(raw.astype(np.int8))


def min_max_normalize(ds: Dataset) -> Dataset:
    """Affine-map each feature to [0, 1]; constant features map to all zeros.

    Idempotent: applying it twice gives exactly the same array.
    """
    pts = ds.points
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = hi - lo
    out = np.zeros_like(pts)
    live = span > 0
    out[:, live] = (pts[:, live] - lo[live]) / span[live]
    return Dataset(out)

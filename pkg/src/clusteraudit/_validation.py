"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np


def check_matrix(X, *, name: str = "X", min_rows: int = 1, min_cols: int = 1) -> np.ndarray:
    """Coerce ``X`` to a 2-D float64 array of finite values."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {X.shape}")
    n, d = X.shape
    if n < min_rows:
        raise ValueError(f"{name} needs at least {min_rows} row(s), got {n}")
    if d < min_cols:
        raise ValueError(f"{name} needs at least {min_cols} column(s), got {d}")
    if not np.isfinite(X).all():
        bad = np.argwhere(~np.isfinite(X))[0]
        raise ValueError(f"{name} contains a non-finite value at row {bad[0]}, column {bad[1]}")
    return X


def check_labels(labels, n: int, *, name: str = "labels") -> np.ndarray:
    """Coerce ``labels`` to a 1-D int64 array of length ``n``."""
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if arr.shape[0] != n:
        raise ValueError(f"{name} has length {arr.shape[0]}, expected {n}")
    if arr.dtype.kind == "f":
        if not np.isfinite(arr).all():
            raise ValueError(f"{name} contains non-finite values")
        rounded = np.rint(arr)
        if not np.array_equal(rounded, arr):
            raise ValueError(f"{name} must contain integer cluster/class ids")
        arr = rounded
    elif arr.dtype.kind not in "iu":
        raise ValueError(f"{name} must be an integer array, got dtype {arr.dtype}")
    return arr.astype(np.int64)


def check_seed(seed) -> int:
    """Validate a non-negative 64-bit integer seed."""
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")
    return seed

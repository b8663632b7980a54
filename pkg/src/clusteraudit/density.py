"""1-D Gaussian kernel density estimation and prominence-based peak counting."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

GRID_SIZE = 256


class DensityCurve(NamedTuple):
    grid: np.ndarray
    density: np.ndarray


def silverman_bandwidth(values) -> float:
    """Rule-of-thumb bandwidth 1.06 * std * n^(-1/5)."""
    values = np.asarray(values, dtype=np.float64)
    if values.size < 2:
        raise ValueError("need at least 2 values")
    return float(1.06 * values.std(ddof=1) * values.size ** (-0.2))


def density_profile(values, bandwidth: float | None = None) -> DensityCurve:
    """Gaussian KDE on a 256-point grid spanning [min - 3h, max + 3h].

    The curve is renormalized so its trapezoid integral is exactly 1. When
    all values coincide (zero bandwidth), a unit-bandwidth bump around the
    common value is returned, i.e. a single-peak curve.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise ValueError(f"values must be 1-D, got shape {values.shape}")
    if values.size < 2:
        raise ValueError("need at least 2 values")
    if not np.isfinite(values).all():
        raise ValueError("values must be finite")
    h = silverman_bandwidth(values) if bandwidth is None else float(bandwidth)
    if bandwidth is not None and bandwidth <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    if h <= 0:
        h = 1.0  # all values identical: degenerate spike
    grid = np.linspace(values.min() - 3 * h, values.max() + 3 * h, GRID_SIZE)
    z = (grid[:, None] - values[None, :]) / h
    density = np.exp(-0.5 * z * z).sum(axis=1) / (values.size * h * math.sqrt(2 * math.pi))
    density /= np.trapezoid(density, grid)
    return DensityCurve(grid, density)


def _plateau_peaks(y: np.ndarray) -> list[int]:
    """Indices of local maxima; plateaus collapse to their first index and
    boundary maxima count."""
    n = len(y)
    peaks = []
    i = 0
    while i < n:
        j = i
        while j + 1 < n and y[j + 1] == y[i]:
            j += 1
        left_ok = i == 0 or y[i - 1] < y[i]
        right_ok = j == n - 1 or y[j + 1] < y[i]
        if left_ok and right_ok:
            peaks.append(i)
        i = j + 1
    return peaks


def _prominence(y: np.ndarray, peak: int) -> float:
    """Topographic prominence: height above the higher of the two flanking
    minima that separate the peak from strictly taller terrain (or the ends).

    A boundary peak has terrain on one side only; that side's minimum is used.
    """
    h = y[peak]
    n = len(y)
    bases = []
    for step in (-1, 1):
        i = peak + step
        if not 0 <= i < n:
            continue
        low = h
        while 0 <= i < n and y[i] <= h:
            low = min(low, y[i])
            i += step
        bases.append(low)
    if not bases:
        return 0.0
    return float(h - max(bases))


def peak_indices(density, min_prominence: float = 0.1) -> list[int]:
    """Local maxima whose prominence reaches ``min_prominence`` times the
    curve maximum, ordered by position."""
    y = np.asarray(density, dtype=np.float64)
    if y.ndim != 1 or y.size == 0:
        raise ValueError("density must be a non-empty 1-D sequence")
    top = y.max()
    if top == y.min():
        return [0]  # constant curve: one degenerate peak
    threshold = min_prominence * top
    return [p for p in _plateau_peaks(y) if _prominence(y, p) >= threshold]


def count_peaks(curve, min_prominence: float = 0.1) -> int:
    """Number of sufficiently prominent local maxima of a density curve."""
    density = curve.density if isinstance(curve, DensityCurve) else curve
    return len(peak_indices(density, min_prominence))


def peak_prominence(density, peak: int) -> float:
    """Prominence of the local maximum at index ``peak``."""
    y = np.asarray(density, dtype=np.float64)
    if not 0 <= peak < y.size:
        raise ValueError(f"peak index {peak} out of range")
    return _prominence(y, peak)

"""Synthetic dataset generators for the three audit case studies.

Each preset reproduces one failure mode of class labels as clustering ground
truth: a class split across separated regions (``preset_sd2``,
``preset_split_class``) and two classes merged into one dense region
(``preset_overlap_pair``). All coordinates live in the unit square/cube.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._validation import check_seed
from .data import Dataset, encode_labels


@dataclass(frozen=True)
class BlobSpec:
    """One axis-aligned Gaussian blob: center, per-axis stddev, size, class id."""

    center: tuple[float, ...]
    stddev: tuple[float, ...]
    count: int
    class_label: int

    def __post_init__(self):
        center = tuple(float(c) for c in self.center)
        stddev = tuple(float(s) for s in self.stddev)
        if len(center) != len(stddev):
            raise ValueError("center and stddev must have the same dimensionality")
        if not center:
            raise ValueError("center must have at least one component")
        if any(s <= 0 for s in stddev):
            raise ValueError("stddev components must be positive")
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "stddev", stddev)


def gen_blobs(specs: Sequence[BlobSpec], seed: int = 0) -> Dataset:
    """Sample axis-aligned Gaussian blobs, clipped to the unit cube.

    Labels come from ``class_label`` (distinct blobs may share a class) and
    are re-encoded densely in first-appearance order. The same seed gives a
    bit-identical dataset.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("specs must not be empty")
    d = len(specs[0].center)
    if any(len(s.center) != d for s in specs):
        raise ValueError("all blobs must have the same dimensionality")
    rng = np.random.default_rng(check_seed(seed))
    points = []
    raw_labels = []
    for spec in specs:
        sample = rng.normal(spec.center, spec.stddev, size=(spec.count, d))
        points.append(np.clip(sample, 0.0, 1.0))
        raw_labels.extend([spec.class_label] * spec.count)
    labels, label_names = encode_labels(raw_labels)
    names = tuple(f"x{i}" for i in range(d))
    return Dataset(np.vstack(points), names, labels, label_names)


def preset_sd2(seed: int = 0) -> Dataset:
    """Two-class dataset of three well separated blobs (n = 3000, d = 2).

    Class 0 is a single blob of 800 points; class 1 consists of two blobs of
    1000 and 1200 points. The class-1 blobs are closer to each other than to
    class 0, so 2-means merges exactly them, while the natural structure has
    three clusters. Pairwise center distances are >= 0.2.
    """
    return gen_blobs(
        [
            BlobSpec((0.50, 0.88), (0.008, 0.002), 800, 0),
            BlobSpec((0.34, 0.22), (0.007, 0.003), 1000, 1),
            BlobSpec((0.66, 0.22), (0.007, 0.004), 1200, 1),
        ],
        seed,
    )


def preset_overlap_pair(seed: int = 0) -> Dataset:
    """Two heavily overlapping classes (n = 400, d = 2).

    Two 200-point isotropic Gaussians whose centers are one pooled standard
    deviation apart, so the sample looks like a single blob.
    """
    sigma = 0.08
    return gen_blobs(
        [
            BlobSpec((0.46, 0.50), (sigma, sigma), 200, 0),
            BlobSpec((0.54, 0.50), (sigma, sigma), 200, 1),
        ],
        seed,
    )


def preset_split_class(seed: int = 0) -> Dataset:
    """One intact class plus one class split across two regions (n = 864, d = 2).

    Class 0 is a single blob of 270 points. Class 1 has 300 points in a
    separate region (stretched perpendicular to the separation axis) and 294
    points co-located with class 0, mirroring a split class that also
    overlaps its neighbor.
    """
    return gen_blobs(
        [
            BlobSpec((0.725, 0.50), (0.10, 0.10), 270, 0),
            BlobSpec((0.275, 0.50), (0.05, 0.18), 300, 1),
            BlobSpec((0.725, 0.50), (0.07, 0.07), 294, 1),
        ],
        seed,
    )


PRESETS = {
    "sd2": preset_sd2,
    "overlap": preset_overlap_pair,
    "split": preset_split_class,
}

"""Cluster assignments and contingency tables between two assignments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_labels

#: Cluster id reserved for noise points (DBSCAN convention).
NOISE = -1


def _canonicalize(raw: np.ndarray) -> np.ndarray:
    """Re-encode non-noise ids to 0..k-1 in first-appearance order; noise stays -1."""
    out = np.full(raw.shape[0], NOISE, dtype=np.int64)
    mapping: dict[int, int] = {}
    for i, v in enumerate(raw):
        if v == NOISE:
            continue
        v = int(v)
        if v not in mapping:
            mapping[v] = len(mapping)
        out[i] = mapping[v]
    return out


@dataclass(frozen=True)
class Partition:
    """Assignment of n points to clusters 0..k-1, with noise points marked -1.

    Invariants: non-noise ids are contiguous and in first-appearance order,
    every non-noise cluster is non-empty, and sum(sizes) + n_noise == n.
    """

    labels: np.ndarray
    k: int
    sizes: np.ndarray
    n_noise: int

    @classmethod
    def from_labels(cls, labels, noise_ids=(NOISE,)) -> "Partition":
        """Build a canonical Partition from any integer assignment.

        Ids listed in ``noise_ids`` are treated as noise; all other ids are
        densely re-encoded preserving first-appearance order.
        """
        arr = check_labels(labels, len(labels))
        if len(arr) == 0:
            raise ValueError("a partition needs at least one point")
        if set(noise_ids) != {NOISE}:
            arr = arr.copy()
            for nid in noise_ids:
                arr[arr == nid] = NOISE
        if (arr < NOISE).any():
            raise ValueError("cluster ids must be >= -1 (-1 marks noise)")
        canon = _canonicalize(arr)
        k = int(canon.max()) + 1 if (canon != NOISE).any() else 0
        sizes = np.bincount(canon[canon != NOISE], minlength=k).astype(np.int64)
        n_noise = int((canon == NOISE).sum())
        canon.flags.writeable = False
        sizes.flags.writeable = False
        return cls(canon, k, sizes, n_noise)

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    def with_noise_as_cluster(self) -> "Partition":
        """Group all noise points into one extra cluster with id k.

        Used before external-metric comparisons so that n is preserved.
        """
        if self.n_noise == 0:
            return self
        labels = self.labels.copy()
        labels[labels == NOISE] = self.k
        return Partition.from_labels(labels)

    def same_assignment(self, other: "Partition") -> bool:
        """True when both canonical label arrays are identical."""
        return self.n == other.n and bool(np.array_equal(self.labels, other.labels))


def as_partition(p) -> Partition:
    """Accept a Partition or a raw label array."""
    if isinstance(p, Partition):
        return p
    return Partition.from_labels(p)


@dataclass(frozen=True)
class ContingencyTable:
    """k_U x k_V count matrix between two partitions, with margins.

    ``counts[i, j]`` is the number of points in cluster i of U and cluster j
    of V; ``row_margins``/``col_margins`` are the cluster sizes, ``n`` the total.
    """

    counts: np.ndarray
    row_margins: np.ndarray
    col_margins: np.ndarray
    n: int

    @classmethod
    def from_counts(cls, counts) -> "ContingencyTable":
        counts = np.asarray(counts, dtype=np.int64)
        if counts.ndim != 2:
            raise ValueError(f"counts must be 2-dimensional, got shape {counts.shape}")
        if (counts < 0).any():
            raise ValueError("counts must be non-negative")
        rows = counts.sum(axis=1)
        cols = counts.sum(axis=0)
        counts = counts.copy()
        counts.flags.writeable = False
        rows.flags.writeable = False
        cols.flags.writeable = False
        return cls(counts, rows, cols, int(counts.sum()))

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable.from_counts(self.counts.T)


def contingency(u, v) -> ContingencyTable:
    """Cross-tabulate two partitions of the same points.

    Noise handling is applied first: noise points in either partition are
    grouped into one extra synthetic cluster, so every point is counted.
    """
    u = as_partition(u)
    v = as_partition(v)
    if u.n != v.n:
        raise ValueError(f"partition lengths differ: {u.n} != {v.n}")
    u = u.with_noise_as_cluster()
    v = v.with_noise_as_cluster()
    ku = max(u.k, 1)
    kv = max(v.k, 1)
    flat = u.labels * kv + v.labels
    counts = np.bincount(flat, minlength=ku * kv).reshape(ku, kv)
    return ContingencyTable.from_counts(counts)

"""Internal and external clustering validity indices.

Internal indices score a partition from geometry alone and are undefined for
fewer than two non-noise clusters. External indices score agreement with a
reference partition and are computed from the contingency table. All
information-theoretic quantities use natural logarithms (nats).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._validation import check_matrix
from .partition import ContingencyTable, Partition, as_partition, contingency

NORMALIZERS = ("arithmetic", "geometric", "max", "min")

_DISTANCE_BLOCK = 512


def _pairwise_block(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Euclidean distances between the rows of A and the rows of B."""
    d2 = (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :] - 2.0 * (A @ B.T)
    np.maximum(d2, 0.0, out=d2)
    return np.sqrt(d2)


def entropy(p) -> float:
    """Shannon entropy of the cluster-size distribution, in nats.

    Noise points are grouped into one extra cluster first, matching the
    convention used by the external metrics.
    """
    p = as_partition(p).with_noise_as_cluster()
    return _entropy_from_sizes(p.sizes, p.n)


def _entropy_from_sizes(sizes: np.ndarray, n: int) -> float:
    sizes = np.asarray(sizes, dtype=np.float64)
    probs = sizes[sizes > 0] / n
    return float(-(probs * np.log(probs)).sum())


def _group_points(X: np.ndarray, p: Partition) -> tuple[np.ndarray, np.ndarray]:
    """Non-noise points and their cluster ids."""
    mask = p.labels >= 0
    return X[mask], p.labels[mask]


def davies_bouldin(X, p) -> float:
    """Davies-Bouldin index: mean over clusters of the worst-case ratio of
    summed intra-cluster spread to centroid separation. Lower is better.

    Noise points are excluded. Requires at least two non-noise clusters and
    pairwise distinct centroids.
    """
    p = as_partition(p)
    X = check_matrix(X)
    if X.shape[0] != p.n:
        raise ValueError(f"X has {X.shape[0]} rows but the partition has {p.n} points")
    if p.k < 2:
        raise ValueError(
            f"davies_bouldin needs at least 2 non-noise clusters, got {p.k}"
        )
    pts, lab = _group_points(X, p)
    k = p.k
    centroids = np.vstack([pts[lab == i].mean(axis=0) for i in range(k)])
    spread = np.array(
        [np.linalg.norm(pts[lab == i] - centroids[i], axis=1).mean() for i in range(k)]
    )
    sep = _pairwise_block(centroids, centroids)
    ratios = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            if sep[i, j] == 0.0:
                raise ValueError(f"clusters {i} and {j} have coincident centroids")
            ratios[i, j] = (spread[i] + spread[j]) / sep[i, j]
    return float(ratios.max(axis=1).mean())


def silhouette(X, p) -> float:
    """Mean silhouette width over all non-noise points, in [-1, 1].

    A point in a singleton cluster contributes 0. Requires at least two
    non-noise clusters; noise points are excluded entirely.
    """
    p = as_partition(p)
    X = check_matrix(X)
    if X.shape[0] != p.n:
        raise ValueError(f"X has {X.shape[0]} rows but the partition has {p.n} points")
    if p.k < 2:
        raise ValueError(f"silhouette needs at least 2 non-noise clusters, got {p.k}")
    pts, lab = _group_points(X, p)
    m = pts.shape[0]
    k = p.k
    sizes = np.bincount(lab, minlength=k).astype(np.float64)
    onehot = np.zeros((m, k))
    onehot[np.arange(m), lab] = 1.0
    # per-point summed distance to every cluster, accumulated in fixed order
    sums = np.empty((m, k))
    for start in range(0, m, _DISTANCE_BLOCK):
        stop = min(start + _DISTANCE_BLOCK, m)
        sums[start:stop] = _pairwise_block(pts[start:stop], pts) @ onehot
    own = sizes[lab]
    with np.errstate(invalid="ignore", divide="ignore"):
        a = sums[np.arange(m), lab] / (own - 1.0)
    mean_other = sums / sizes[None, :]
    mean_other[np.arange(m), lab] = np.inf
    b = mean_other.min(axis=1)
    s = np.zeros(m)
    multi = own > 1
    denom = np.maximum(a[multi], b[multi])
    # coincident duplicate points can give a == b == 0; their width is 0
    s[multi] = np.where(denom > 0, (b[multi] - a[multi]) / np.where(denom > 0, denom, 1.0), 0.0)
    return float(s.mean())


class RandScores(NamedTuple):
    ri: float
    ari: float


def _comb2(x: int) -> int:
    return x * (x - 1) // 2


def rand_scores(t: ContingencyTable) -> RandScores:
    """Rand index and Hubert-Arabie adjusted Rand index from a contingency table.

    Pair counts use exact integer arithmetic. When both partitions are
    trivial (the chance-adjustment denominator vanishes) the ARI is defined
    as 1 for identical partitions and 0 otherwise.
    """
    n = t.n
    if n < 2:
        raise ValueError(f"rand_scores needs at least 2 points, got {n}")
    same_both = sum(_comb2(int(c)) for c in t.counts.ravel())
    same_rows = sum(_comb2(int(c)) for c in t.row_margins)
    same_cols = sum(_comb2(int(c)) for c in t.col_margins)
    total = _comb2(n)
    diff_both = total + same_both - same_rows - same_cols
    ri = (same_both + diff_both) / total
    expected = same_rows * same_cols / total
    max_index = 0.5 * (same_rows + same_cols)
    if max_index == expected:
        return RandScores(ri, 1.0 if ri == 1.0 else 0.0)
    return RandScores(ri, (same_both - expected) / (max_index - expected))


def mutual_info(t: ContingencyTable) -> float:
    """Mutual information between the two partitions of a contingency table, in nats."""
    if t.n < 1:
        raise ValueError("mutual_info needs a non-empty table")
    n = float(t.n)
    counts = t.counts.astype(np.float64)
    outer = t.row_margins.astype(np.float64)[:, None] * t.col_margins.astype(np.float64)[None, :]
    nz = counts > 0
    return float(((counts[nz] / n) * np.log(n * counts[nz] / outer[nz])).sum())


def expected_mutual_info(row_margins, col_margins, n: int) -> float:
    """Expected MI between two random partitions with the given cluster sizes.

    Expectation is over the hypergeometric model (uniformly random
    assignments with fixed margins); log-factorials are accumulated for
    numerical stability.
    """
    a = np.asarray(row_margins, dtype=np.int64)
    b = np.asarray(col_margins, dtype=np.int64)
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    if a.sum() != n or b.sum() != n:
        raise ValueError(
            f"margins must sum to n={n}, got {int(a.sum())} and {int(b.sum())}"
        )
    if (a < 0).any() or (b < 0).any():
        raise ValueError("margins must be non-negative")
    logfact = np.array([math.lgamma(i + 1) for i in range(n + 1)])
    emi = 0.0
    for ai in a:
        if ai == 0:
            continue
        for bj in b:
            if bj == 0:
                continue
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            if hi < lo:
                continue
            nij = np.arange(lo, hi + 1, dtype=np.int64)
            log_prob = (
                logfact[ai]
                + logfact[bj]
                + logfact[n - ai]
                + logfact[n - bj]
                - logfact[n]
                - logfact[nij]
                - logfact[ai - nij]
                - logfact[bj - nij]
                - logfact[n - ai - bj + nij]
            )
            terms = (nij / n) * (np.log(n * nij) - math.log(ai * bj)) * np.exp(log_prob)
            emi += float(terms.sum())
    return emi


def _normalizer_value(h_u: float, h_v: float, normalizer: str) -> float:
    if normalizer == "arithmetic":
        return 0.5 * (h_u + h_v)
    if normalizer == "geometric":
        return math.sqrt(h_u * h_v)
    if normalizer == "max":
        return max(h_u, h_v)
    if normalizer == "min":
        return min(h_u, h_v)
    raise ValueError(f"unknown normalizer {normalizer!r}, expected one of {NORMALIZERS}")


def normalized_mutual_info(t: ContingencyTable, normalizer: str = "arithmetic") -> float:
    """MI divided by the chosen mean of the two partition entropies.

    Two trivial (single-cluster) partitions are identical by construction and
    score 1. A vanishing normalizer with zero MI scores 0.
    """
    h_u = _entropy_from_sizes(t.row_margins, t.n)
    h_v = _entropy_from_sizes(t.col_margins, t.n)
    if h_u == 0.0 and h_v == 0.0:
        return 1.0
    norm = _normalizer_value(h_u, h_v, normalizer)
    mi = mutual_info(t)
    if norm <= 0.0:
        # only reachable with the min normalizer and one trivial side; MI is 0 there
        return 0.0
    return mi / norm


def adjusted_mutual_info(t: ContingencyTable, normalizer: str = "arithmetic") -> float:
    """Chance-adjusted MI: (MI - E[MI]) / (normalizer - E[MI]).

    A non-positive denominator (trivial partitions) is defined as 0,
    the chance-level agreement.
    """
    h_u = _entropy_from_sizes(t.row_margins, t.n)
    h_v = _entropy_from_sizes(t.col_margins, t.n)
    norm = _normalizer_value(h_u, h_v, normalizer)
    emi = expected_mutual_info(t.row_margins, t.col_margins, t.n)
    denom = norm - emi
    if denom <= 0.0:
        return 0.0
    return (mutual_info(t) - emi) / denom


@dataclass(frozen=True)
class MetricReport:
    """All validity scores for one clustering, optionally against a reference.

    ``dbi``/``sc`` are None when the evaluated partition has fewer than two
    non-noise clusters (``internal_reason`` says why); the external scores are
    None when no reference partition was given.
    """

    n_clusters: int
    n_noise: int
    dbi: float | None = None
    sc: float | None = None
    internal_reason: str | None = None
    ri: float | None = None
    ari: float | None = None
    mi: float | None = None
    nmi: float | None = None
    ami: float | None = None

    def to_dict(self) -> dict:
        return {
            "n_clusters": self.n_clusters,
            "n_noise": self.n_noise,
            "dbi": self.dbi,
            "sc": self.sc,
            "internal_reason": self.internal_reason,
            "ri": self.ri,
            "ari": self.ari,
            "mi": self.mi,
            "nmi": self.nmi,
            "ami": self.ami,
        }


def evaluate(X, pred, reference=None, normalizer: str = "arithmetic") -> MetricReport:
    """Score a partition of X internally and, if a reference is given, externally."""
    pred = as_partition(pred)
    X = check_matrix(X)
    if pred.k >= 2:
        dbi = davies_bouldin(X, pred)
        sc = silhouette(X, pred)
        reason = None
    else:
        dbi = sc = None
        reason = (
            f"internal indices need at least two clusters; partition has {pred.k}"
        )
    report = MetricReport(
        n_clusters=pred.k, n_noise=pred.n_noise, dbi=dbi, sc=sc, internal_reason=reason
    )
    if reference is None:
        return report
    t = contingency(pred, reference)
    ri, ari = rand_scores(t)
    return MetricReport(
        n_clusters=pred.k,
        n_noise=pred.n_noise,
        dbi=dbi,
        sc=sc,
        internal_reason=reason,
        ri=ri,
        ari=ari,
        mi=mutual_info(t),
        nmi=normalized_mutual_info(t, normalizer),
        ami=adjusted_mutual_info(t, normalizer),
    )

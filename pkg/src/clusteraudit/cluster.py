"""Reference clustering estimators and the k-dist epsilon heuristic.

Both estimators follow the scikit-learn fit/fit_predict protocol and are
bit-for-bit deterministic: every tie is broken toward the lowest index and
all randomness derives from an explicit integer seed.
"""

from __future__ import annotations

from collections import deque
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from ._validation import check_matrix, check_seed
from .partition import NOISE, Partition

_NEIGHBOR_BLOCK = 1024


def _squared_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    d2 = (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :] - 2.0 * (A @ B.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[int(rng.integers(n))]
    d2 = _squared_distances(X, centers[:1])[:, 0]
    for c in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            idx = int(rng.integers(n))
        centers[c] = X[idx]
        np.minimum(d2, _squared_distances(X, centers[c : c + 1])[:, 0], out=d2)
    return centers


def _repair_empty(X, labels, centers, d2_assigned):
    """Re-seed each empty cluster with the point farthest from its centroid.

    Only points from clusters of size >= 2 are eligible, so no cluster is
    emptied by the repair. Ties go to the lowest point index.
    """
    k = centers.shape[0]
    sizes = np.bincount(labels, minlength=k)
    for empty in np.flatnonzero(sizes == 0):
        eligible = sizes[labels] >= 2
        if not eligible.any():
            break
        cand = np.where(eligible, d2_assigned, -np.inf)
        far = int(np.argmax(cand))
        sizes[labels[far]] -= 1
        labels[far] = empty
        sizes[empty] += 1
        centers[empty] = X[far]
        d2_assigned[far] = 0.0
    return labels, centers


def _lloyd(X, k, rng, max_iter, tol):
    n = X.shape[0]
    centers = _kmeans_pp_init(X, k, rng)
    labels = None
    small_movement = False
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        d2 = _squared_distances(X, centers)
        new_labels = d2.argmin(axis=1)
        new_labels, centers = _repair_empty(
            X, new_labels, centers, d2[np.arange(n), new_labels]
        )
        stable = labels is not None and np.array_equal(new_labels, labels)
        labels = new_labels
        if stable or small_movement:
            # labels were just assigned against the current centers, so
            # reassignment is a no-op either way
            break
        new_centers = np.vstack([X[labels == i].mean(axis=0) for i in range(k)])
        movement = np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max()
        centers = new_centers
        small_movement = movement <= tol
    inertia = float(_squared_distances(X, centers)[np.arange(n), labels].sum())
    return labels, centers, inertia, n_iter


class KMeans(BaseEstimator, ClusterMixin):
    """Lloyd iterations from k-means++ starts, best of ``n_init`` restarts.

    Restart seeds are derived deterministically from ``random_state``; the
    restart with minimal within-cluster sum of squares wins (ties: lowest
    restart index). Cluster ids are re-encoded in first-appearance order, so
    the output is independent of which restart produced it.
    """

    def __init__(self, n_clusters: int, n_init: int = 16, max_iter: int = 300,
                 tol: float = 1e-6, random_state: int = 0):
        self.n_clusters = n_clusters
        self.n_init = n_init
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def fit(self, X, y=None) -> "KMeans":
        X = check_matrix(X)
        k = self.n_clusters
        if not isinstance(k, (int, np.integer)) or k < 1:
            raise ValueError(f"n_clusters must be a positive integer, got {k!r}")
        if k > X.shape[0]:
            raise ValueError(f"n_clusters={k} exceeds the number of points {X.shape[0]}")
        if self.tol < 0:
            raise ValueError(f"tol must be non-negative, got {self.tol}")
        seed = check_seed(self.random_state)
        best = None
        for restart in range(self.n_init):
            rng = np.random.default_rng([seed, restart])
            labels, centers, inertia, n_iter = _lloyd(X, k, rng, self.max_iter, self.tol)
            if best is None or inertia < best[2]:
                best = (labels, centers, inertia, n_iter)
        labels, centers, inertia, n_iter = best
        part = Partition.from_labels(labels)
        order = [int(labels[np.flatnonzero(part.labels == i)[0]]) for i in range(k)]
        self.labels_ = part.labels
        self.cluster_centers_ = centers[order]
        self.inertia_ = inertia
        self.n_iter_ = n_iter
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "cluster_centers_"):
            raise ValueError("this KMeans instance is not fitted yet")
        X = check_matrix(X)
        return _squared_distances(X, self.cluster_centers_).argmin(axis=1)


class DBSCAN(BaseEstimator, ClusterMixin):
    """Density-based clustering with classic core/border/noise semantics.

    A core point has at least ``min_pts`` neighbors within ``eps`` including
    itself. Clusters are the connected components of core points plus the
    border points they reach; a border point reachable from several clusters
    joins the first cluster discovered in point-index order. Noise points get
    the label -1. Neighborhood search is brute force, which is fine at desk
    scale.
    """

    def __init__(self, eps: float, min_pts: int = 4):
        self.eps = eps
        self.min_pts = min_pts

    def fit(self, X, y=None) -> "DBSCAN":
        X = check_matrix(X)
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if not isinstance(self.min_pts, (int, np.integer)) or self.min_pts < 1:
            raise ValueError(f"min_pts must be a positive integer, got {self.min_pts!r}")
        n = X.shape[0]
        eps2 = float(self.eps) ** 2
        adj = np.empty((n, n), dtype=bool)
        for start in range(0, n, _NEIGHBOR_BLOCK):
            stop = min(start + _NEIGHBOR_BLOCK, n)
            adj[start:stop] = _squared_distances(X[start:stop], X) <= eps2
        core = adj.sum(axis=1) >= self.min_pts
        labels = np.full(n, NOISE, dtype=np.int64)
        cluster = 0
        for i in range(n):
            if labels[i] != NOISE or not core[i]:
                continue
            labels[i] = cluster
            queue = deque([i])
            while queue:
                q = queue.popleft()
                for nb in np.flatnonzero(adj[q]):
                    if labels[nb] == NOISE:
                        labels[nb] = cluster
                        if core[nb]:
                            queue.append(nb)
            cluster += 1
        self.labels_ = Partition.from_labels(labels).labels
        self.core_mask_ = core
        return self


def k_dist_curve(X, k: int) -> np.ndarray:
    """Distance from every point to its k-th nearest neighbor (self excluded),
    sorted in descending order."""
    X = check_matrix(X)
    n = X.shape[0]
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if k >= n:
        raise ValueError(f"k must be smaller than the number of points ({k} >= {n})")
    kth = np.empty(n)
    for start in range(0, n, _NEIGHBOR_BLOCK):
        stop = min(start + _NEIGHBOR_BLOCK, n)
        d2 = _squared_distances(X[start:stop], X)
        # position k in the sorted row is the k-th neighbor once self (distance 0) is skipped
        kth[start:stop] = np.partition(d2, k, axis=1)[:, k]
    return np.sort(np.sqrt(kth))[::-1]


class EpsSuggestion(NamedTuple):
    eps: float
    index: int
    curve: np.ndarray


def suggest_eps(curve) -> EpsSuggestion:
    """Pick the elbow of a descending k-dist curve as a DBSCAN eps candidate.

    The elbow is the point of maximum perpendicular distance to the chord
    between the first and last point, computed on axes normalized to [0, 1].
    A fully degenerate (linear) curve falls back to the midpoint. The full
    curve is returned so a human can override the suggestion.
    """
    curve = np.asarray(curve, dtype=np.float64)
    if curve.ndim != 1 or curve.shape[0] < 3:
        raise ValueError("curve must be a 1-D sequence with at least 3 values")
    n = curve.shape[0]
    x = np.arange(n) / (n - 1)
    span = curve[0] - curve[-1]
    if span <= 0:
        return EpsSuggestion(float(curve[(n - 1) // 2]), (n - 1) // 2, curve)
    y = (curve - curve[-1]) / span
    # chord runs from (0, 1) to (1, 0); |1 - x - y| is proportional to the distance
    dist = np.abs(1.0 - x - y)
    best = dist.max()
    if best <= 1e-12:
        idx = (n - 1) // 2
    else:
        idx = int(np.argmax(dist))
    return EpsSuggestion(float(curve[idx]), idx, curve)

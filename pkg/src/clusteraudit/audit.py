"""Label-vs-structure audit: decide whether class labels are safe to use as
clustering ground truth.

The audit combines four kinds of evidence: internal indices of the label
partition, per-class split detection (in-class density clustering plus
principal-axis density peaks), cross-class neighborhood mixing, and a
parameter sweep checking whether internal and external criteria agree on the
best clustering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._validation import check_labels, check_matrix, check_seed
from .cluster import DBSCAN, KMeans, k_dist_curve, suggest_eps
from .decomposition import PCA
from .density import count_peaks, density_profile, peak_indices, peak_prominence
from .metrics import MetricReport, evaluate, rand_scores
from .partition import Partition, as_partition, contingency

SCHEMA_VERSION = 1

#: Verdict values, from best to worst.
VERDICTS = (
    "labels-usable",
    "sweep-inconsistent",
    "overlap-detected",
    "split-detected",
    "both",
)

INTERNAL_METRICS = ("dbi", "sc")
EXTERNAL_METRICS = ("ri", "ari", "mi", "nmi", "ami")


@dataclass(frozen=True)
class AuditConfig:
    """Thresholds and knobs for the audit; defaults follow the methodology.

    ``kmeans_k_values`` defaults to 1..max(3, n_classes + 1); DBSCAN sweep
    cells are opt-in via ``dbscan_eps_values`` because suggested-eps noise
    trimming can flip the internal argmax on perfectly clean data.
    """

    min_pts: int = 4
    neighbors: int = 10
    mixing_threshold: float = 0.2
    minor_fraction: float = 0.1
    min_prominence: float = 0.1
    kmeans_restarts: int = 16
    kmeans_k_values: tuple[int, ...] | None = None
    dbscan_eps_values: tuple[float, ...] = ()
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.min_pts < 1:
            raise ValueError("min_pts must be >= 1")
        if self.neighbors < 1:
            raise ValueError("neighbors must be >= 1")
        if not 0 <= self.mixing_threshold <= 1:
            raise ValueError("mixing_threshold must lie in [0, 1]")
        if not 0 <= self.minor_fraction <= 0.5:
            raise ValueError("minor_fraction must lie in [0, 0.5]")
        check_seed(self.seed)
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class SweepCell:
    """One grid cell: an algorithm name plus its parameters."""

    algorithm: str
    params: dict

    def label(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.algorithm}({inner})"


@dataclass(frozen=True)
class SweepCellResult:
    cell: SweepCell
    partition: Partition
    report: MetricReport


@dataclass(frozen=True)
class SweepResult:
    """Per-cell scores plus the argbest bookkeeping.

    ``inconsistent`` is True exactly when the partitions picked by the
    designated internal metric (SC) and external metric (AMI) differ, judged
    by ARI == 1 between the two partitions rather than by parameter equality.
    """

    cells: tuple[SweepCellResult, ...]
    best_by_internal: dict
    best_by_external: dict
    inconsistent: bool

    def to_dict(self) -> dict:
        return {
            "cells": [
                {
                    "algorithm": c.cell.algorithm,
                    "params": dict(c.cell.params),
                    "metrics": c.report.to_dict(),
                }
                for c in self.cells
            ],
            "best_by_internal": dict(self.best_by_internal),
            "best_by_external": dict(self.best_by_external),
            "inconsistent": self.inconsistent,
        }


def default_grid(n_classes: int, config: AuditConfig) -> list[SweepCell]:
    """K-means cells over k = 1..max(3, n_classes + 1), plus any configured
    DBSCAN eps cells."""
    if config.kmeans_k_values is not None:
        ks: Sequence[int] = config.kmeans_k_values
    else:
        ks = range(1, max(3, n_classes + 1) + 1)
    cells = [SweepCell("kmeans", {"k": int(k)}) for k in ks]
    cells.extend(
        SweepCell("dbscan", {"eps": float(e), "min_pts": config.min_pts})
        for e in config.dbscan_eps_values
    )
    return cells


def _run_cell(X: np.ndarray, cell: SweepCell, config: AuditConfig) -> Partition:
    if cell.algorithm == "kmeans":
        est = KMeans(
            n_clusters=int(cell.params["k"]),
            n_init=config.kmeans_restarts,
            random_state=config.seed,
        ).fit(X)
        return Partition.from_labels(est.labels_)
    if cell.algorithm == "dbscan":
        est = DBSCAN(
            eps=float(cell.params["eps"]),
            min_pts=int(cell.params.get("min_pts", config.min_pts)),
        ).fit(X)
        return Partition.from_labels(est.labels_)
    raise ValueError(f"unknown sweep algorithm {cell.algorithm!r}")


def _argbest(values: list[float | None], minimize: bool) -> int | None:
    best_idx = None
    best = None
    for i, v in enumerate(values):
        if v is None:
            continue
        if best is None or (v < best if minimize else v > best):
            best, best_idx = v, i
    return best_idx


def sweep(X, labels, cells: Sequence[SweepCell] | None = None,
          config: AuditConfig | None = None) -> SweepResult:
    """Cluster and score every grid cell against the reference labels.

    Cells run independently (optionally in parallel) with seeds derived from
    the config, so the result is deterministic for a fixed seed regardless of
    the worker count.
    """
    config = config or AuditConfig()
    X = check_matrix(X)
    reference = as_partition(labels)
    if reference.n != X.shape[0]:
        raise ValueError("labels length does not match the number of points")
    if cells is None:
        cells = default_grid(reference.k, config)
    cells = list(cells)
    if not cells:
        raise ValueError("the sweep grid must not be empty")

    def run(cell: SweepCell) -> SweepCellResult:
        part = _run_cell(X, cell, config)
        return SweepCellResult(cell, part, evaluate(X, part, reference))

    if config.workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = tuple(pool.map(run, cells))
    else:
        results = tuple(run(c) for c in cells)

    best_by_internal = {
        name: _argbest([getattr(r.report, name) for r in results], minimize=(name == "dbi"))
        for name in INTERNAL_METRICS
    }
    best_by_external = {
        name: _argbest([getattr(r.report, name) for r in results], minimize=False)
        for name in EXTERNAL_METRICS
    }
    inconsistent = False
    sc_idx = best_by_internal["sc"]
    ami_idx = best_by_external["ami"]
    if sc_idx is not None and ami_idx is not None and sc_idx != ami_idx:
        ari = rand_scores(contingency(results[sc_idx].partition, results[ami_idx].partition)).ari
        inconsistent = ari < 1.0 - 1e-12
    return SweepResult(results, best_by_internal, best_by_external, inconsistent)


@dataclass(frozen=True)
class ClassSplitEvidence:
    """Split evidence for one class.

    ``status`` is "ok" or "insufficient-data". The DBSCAN route reports the
    number of in-class sub-clusters at the per-class suggested eps; the PCA
    route reports the maximum density-peak count of the class along any
    principal axis. ``flagged`` means either route found >= 2 parts with the
    minor part holding at least the configured fraction of the class.
    """

    class_id: int
    class_name: str
    n_points: int
    status: str
    flagged: bool
    eps_used: float | None = None
    subcluster_count: int | None = None
    subcluster_sizes: tuple[int, ...] = ()
    best_axis: int | None = None
    max_peak_count: int | None = None
    peak_minor_fraction: float | None = None

    def to_dict(self) -> dict:
        return {
            "class_id": self.class_id,
            "class_name": self.class_name,
            "n_points": self.n_points,
            "status": self.status,
            "flagged": self.flagged,
            "eps_used": self.eps_used,
            "subcluster_count": self.subcluster_count,
            "subcluster_sizes": list(self.subcluster_sizes),
            "best_axis": self.best_axis,
            "max_peak_count": self.max_peak_count,
            "peak_minor_fraction": self.peak_minor_fraction,
        }


def _peak_minor_fraction(values: np.ndarray, curve, min_prominence: float) -> float:
    """Fraction of points on the smaller side of the valley between the two
    most prominent peaks; 0 when fewer than two peaks exist."""
    peaks = peak_indices(curve.density, min_prominence)
    if len(peaks) < 2:
        return 0.0
    ranked = sorted(peaks, key=lambda p: (-peak_prominence(curve.density, p), p))[:2]
    lo, hi = sorted(ranked)
    valley = lo + int(np.argmin(curve.density[lo : hi + 1]))
    threshold = curve.grid[valley]
    left = float((values <= threshold).mean())
    return min(left, 1.0 - left)


def detect_splits(X, labels, config: AuditConfig | None = None) -> list[ClassSplitEvidence]:
    """Per-class split evidence: in-class DBSCAN sub-clusters and principal-axis
    density peaks. Classes smaller than min_pts + 1 are marked insufficient."""
    config = config or AuditConfig()
    X = check_matrix(X)
    y = check_labels(labels, X.shape[0])
    classes = np.unique(y)
    pca = PCA().fit(X)
    projections = pca.transform(X)
    evidence = []
    for c in classes:
        mask = y == c
        pts = X[mask]
        n_c = int(mask.sum())
        name = str(int(c))
        if n_c <= config.min_pts:
            evidence.append(
                ClassSplitEvidence(int(c), name, n_c, "insufficient-data", False)
            )
            continue
        eps = suggest_eps(k_dist_curve(pts, config.min_pts)).eps
        if eps <= 0:
            evidence.append(
                ClassSplitEvidence(int(c), name, n_c, "insufficient-data", False)
            )
            continue
        sub = Partition.from_labels(DBSCAN(eps=eps, min_pts=config.min_pts).fit(pts).labels_)
        sizes = tuple(int(s) for s in sorted(sub.sizes, reverse=True))
        dbscan_minor = sizes[1] / n_c if len(sizes) >= 2 else 0.0
        best_axis = None
        max_peaks = 0
        peak_minor = 0.0
        for axis in range(projections.shape[1]):
            vals = projections[mask, axis]
            curve = density_profile(vals)
            n_peaks = count_peaks(curve, config.min_prominence)
            minor = (
                _peak_minor_fraction(vals, curve, config.min_prominence)
                if n_peaks >= 2
                else 0.0
            )
            # prefer more peaks; among equals prefer a larger minor side
            if n_peaks > max_peaks or (n_peaks == max_peaks and minor > peak_minor):
                best_axis, max_peaks, peak_minor = axis, n_peaks, minor
        flagged = (sub.k >= 2 and dbscan_minor >= config.minor_fraction) or (
            max_peaks >= 2 and peak_minor >= config.minor_fraction
        )
        evidence.append(
            ClassSplitEvidence(
                class_id=int(c),
                class_name=name,
                n_points=n_c,
                status="ok",
                flagged=flagged,
                eps_used=float(eps),
                subcluster_count=sub.k,
                subcluster_sizes=sizes,
                best_axis=best_axis,
                max_peak_count=max_peaks,
                peak_minor_fraction=peak_minor,
            )
        )
    return evidence


@dataclass(frozen=True)
class OverlapEvidence:
    """Pairwise class mixing scores in [0, 1], symmetrized by max.

    ``mixing[a][b]`` is the larger of the two directed scores: the fraction
    of one class's points whose k nearest neighbors have a majority from the
    other class.
    """

    class_ids: tuple[int, ...]
    mixing: np.ndarray
    flagged_pairs: tuple[tuple[int, int], ...]

    def to_dict(self) -> dict:
        return {
            "class_ids": list(self.class_ids),
            "mixing": [[float(v) for v in row] for row in self.mixing],
            "flagged_pairs": [list(p) for p in self.flagged_pairs],
        }


def detect_overlap(X, labels, neighbors: int = 10,
                   mixing_threshold: float = 0.2) -> OverlapEvidence:
    """Neighborhood-majority mixing between every pair of classes."""
    X = check_matrix(X)
    y = check_labels(labels, X.shape[0])
    n = X.shape[0]
    if neighbors >= n:
        raise ValueError(f"neighbors must be smaller than the number of points ({neighbors} >= {n})")
    classes = [int(c) for c in np.unique(y)]
    L = len(classes)
    mixing = np.zeros((L, L))
    if L >= 2:
        from .metrics import _pairwise_block

        majority = -(-neighbors // 2)  # ceil(neighbors / 2)
        neighbor_labels = np.empty((n, neighbors), dtype=np.int64)
        block = 1024
        for start in range(0, n, block):
            stop = min(start + block, n)
            d = _pairwise_block(X[start:stop], X)
            d[np.arange(stop - start), np.arange(start, stop)] = np.inf
            idx = np.argpartition(d, neighbors - 1, axis=1)[:, :neighbors]
            neighbor_labels[start:stop] = y[idx]
        for a_pos, a in enumerate(classes):
            rows = neighbor_labels[y == a]
            for b_pos, b in enumerate(classes):
                if a == b:
                    continue
                frac = float(((rows == b).sum(axis=1) >= majority).mean())
                mixing[a_pos, b_pos] = frac
        mixing = np.maximum(mixing, mixing.T)
    flagged = tuple(
        (classes[i], classes[j])
        for i in range(L)
        for j in range(i + 1, L)
        if mixing[i, j] >= mixing_threshold
    )
    mixing.flags.writeable = False
    return OverlapEvidence(tuple(classes), mixing, flagged)


@dataclass(frozen=True)
class AuditReport:
    """Everything the audit found, plus the overall verdict."""

    verdict: str
    label_internal: MetricReport
    splits: tuple[ClassSplitEvidence, ...]
    overlap: OverlapEvidence
    sweep: SweepResult
    config: AuditConfig

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "verdict": self.verdict,
            "label_internal": self.label_internal.to_dict(),
            "splits": [e.to_dict() for e in self.splits],
            "overlap": self.overlap.to_dict(),
            "sweep": self.sweep.to_dict(),
            "thresholds": {
                "min_pts": self.config.min_pts,
                "neighbors": self.config.neighbors,
                "mixing_threshold": self.config.mixing_threshold,
                "minor_fraction": self.config.minor_fraction,
                "min_prominence": self.config.min_prominence,
                "seed": self.config.seed,
            },
        }

    def to_text(self) -> str:
        lines = [f"verdict: {self.verdict}"]
        li = self.label_internal
        lines.append(
            "label partition: DBI=%s SC=%s"
            % (
                "n/a" if li.dbi is None else f"{li.dbi:.3f}",
                "n/a" if li.sc is None else f"{li.sc:.3f}",
            )
        )
        for e in self.splits:
            if e.status != "ok":
                lines.append(f"class {e.class_name}: {e.status}")
            else:
                lines.append(
                    f"class {e.class_name}: "
                    f"{'SPLIT' if e.flagged else 'intact'} "
                    f"(sub-clusters={e.subcluster_count}, "
                    f"max peaks={e.max_peak_count} on axis {e.best_axis})"
                )
        if self.overlap.flagged_pairs:
            pairs = ", ".join(f"{a}-{b}" for a, b in self.overlap.flagged_pairs)
            lines.append(f"overlapping class pairs: {pairs}")
        else:
            lines.append("overlapping class pairs: none")
        lines.append(f"sweep inconsistent: {self.sweep.inconsistent}")
        return "\n".join(lines)


def audit(X, labels, config: AuditConfig | None = None,
          cells: Sequence[SweepCell] | None = None) -> AuditReport:
    """Run the full audit of a labeled dataset.

    The verdict is "labels-usable" only when no class is split, no class pair
    overlaps, and the sweep is consistent; otherwise it names the evidence
    found ("both" when splits and overlaps coexist, "sweep-inconsistent" when
    the sweep is the only contradiction).
    """
    config = config or AuditConfig()
    X = check_matrix(X)
    y = check_labels(labels, X.shape[0])
    label_internal = evaluate(X, y)
    splits = detect_splits(X, y, config)
    overlap = detect_overlap(X, y, config.neighbors, config.mixing_threshold)
    sweep_result = sweep(X, y, cells, config)
    has_split = any(e.flagged for e in splits)
    has_overlap = bool(overlap.flagged_pairs)
    if has_split and has_overlap:
        verdict = "both"
    elif has_split:
        verdict = "split-detected"
    elif has_overlap:
        verdict = "overlap-detected"
    elif sweep_result.inconsistent:
        verdict = "sweep-inconsistent"
    else:
        verdict = "labels-usable"
    return AuditReport(
        verdict=verdict,
        label_internal=label_internal,
        splits=tuple(splits),
        overlap=overlap,
        sweep=sweep_result,
        config=config,
    )

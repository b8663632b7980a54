"""Probability that k randomly placed classes stay pairwise disjoint.

Each class is modeled as a circle of radius r whose center is drawn uniformly
in a square box of width w. Closed forms treat the pairwise non-overlap
events as independent and ignore boundary effects; the Monte Carlo estimator
makes neither simplification (and is therefore biased slightly high relative
to the closed forms, since circles near the boundary lose overlap area).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._validation import check_seed

_TRIAL_CHUNK = 512


def _check_geometry(r: float, w: float) -> None:
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    if w <= 0:
        raise ValueError(f"w must be positive, got {w}")
    if 2 * r >= w:
        raise ValueError(f"two circle radii must fit in the box: 2r={2 * r} >= w={w}")


def p_pair(r: float, w: float) -> float:
    """Probability that two random circles of radius r do not overlap."""
    _check_geometry(r, w)
    return max(0.0, 1.0 - 4.0 * math.pi * r * r / (w * w))


def p_disjoint_exact(k: int, r: float, w: float) -> float:
    """Probability that all k circles are pairwise disjoint: p_pair to the
    power of the number of pairs. k = 1 has no pairs and gives 1."""
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if k == 1:
        _check_geometry(r, w)
        return 1.0
    return p_pair(r, w) ** (k * (k - 1) // 2)


def p_disjoint_approx(k: int, r: float, w: float) -> float:
    """First-order exponential approximation exp(-2*pi*r^2*k*(k-1)/w^2).

    Valid for r much smaller than w; enforced as 4*pi*r^2/w^2 < 0.1.
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    _check_geometry(r, w)
    ratio = 4.0 * math.pi * r * r / (w * w)
    if ratio >= 0.1:
        raise ValueError(
            f"approximation requires 4*pi*r^2/w^2 < 0.1 (got {ratio:.4f}); "
            "use p_disjoint_exact instead"
        )
    return math.exp(-2.0 * math.pi * r * r * k * (k - 1) / (w * w))


@dataclass(frozen=True)
class OverlapSimConfig:
    """Configuration for the Monte Carlo disjointness simulation.

    ``inset=True`` samples centers in [r, w-r]^2 so circles never protrude
    past the boundary; the default samples the full box, matching the
    closed-form derivation.
    """

    k: int
    r: float
    w: float
    trials: int = 10_000
    seed: int = 0
    inset: bool = False

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        _check_geometry(self.r, self.w)
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        check_seed(self.seed)


class MonteCarloResult(NamedTuple):
    estimate: float
    stderr: float


def monte_carlo_disjoint(cfg: OverlapSimConfig) -> MonteCarloResult:
    """Fraction of trials in which k uniform centers are pairwise more than
    2r apart (strict inequality), with its binomial standard error.

    All trial draws are a fixed function of (seed, k, trial index), so the
    estimate is reproducible no matter how trials are scheduled.
    """
    if cfg.k == 1:
        return MonteCarloResult(1.0, 0.0)
    rng = np.random.default_rng([cfg.seed, cfg.k])
    lo, hi = (cfg.r, cfg.w - cfg.r) if cfg.inset else (0.0, cfg.w)
    centers = rng.uniform(lo, hi, size=(cfg.trials, cfg.k, 2))
    iu, ju = np.triu_indices(cfg.k, 1)
    threshold = (2.0 * cfg.r) ** 2
    successes = 0
    for start in range(0, cfg.trials, _TRIAL_CHUNK):
        chunk = centers[start : start + _TRIAL_CHUNK]
        diff = chunk[:, iu, :] - chunk[:, ju, :]
        min_d2 = (diff * diff).sum(axis=2).min(axis=1)
        successes += int((min_d2 > threshold).sum())
    estimate = successes / cfg.trials
    stderr = math.sqrt(estimate * (1.0 - estimate) / cfg.trials)
    return MonteCarloResult(estimate, stderr)


class DisjointCurveRow(NamedTuple):
    k: int
    exact: float
    approx: float
    monte_carlo: float
    stderr: float


def disjoint_curve(
    k_values,
    r: float,
    w: float,
    trials: int = 10_000,
    seed: int = 0,
    inset: bool = False,
    workers: int = 1,
) -> list[DisjointCurveRow]:
    """Closed-form and Monte Carlo disjointness probabilities over a k sweep.

    Each k uses an independent, deterministically derived trial stream, so
    results do not depend on ``workers``.
    """
    k_values = [int(k) for k in k_values]

    def row(k: int) -> DisjointCurveRow:
        est, err = monte_carlo_disjoint(
            OverlapSimConfig(k=k, r=r, w=w, trials=trials, seed=seed, inset=inset)
        )
        return DisjointCurveRow(k, p_disjoint_exact(k, r, w), p_disjoint_approx(k, r, w), est, err)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(row, k_values))
    return [row(k) for k in k_values]

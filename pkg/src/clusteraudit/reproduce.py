"""Built-in validation scenarios behind the ``reproduce`` CLI command.

Each target re-runs one of the package's reference scenarios and checks the
measured numbers against their pinned expectations: ``table1`` covers the
split-class benchmark with exact external scores, ``table2-analog`` and
``table3-analog`` cover the overlap and split presets, and ``fig6`` covers
the disjointness-probability model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audit import AuditConfig, SweepCell, audit, sweep
from .cluster import DBSCAN, KMeans, k_dist_curve, suggest_eps
from .datasets import preset_overlap_pair, preset_sd2, preset_split_class
from .metrics import (
    adjusted_mutual_info,
    evaluate,
    mutual_info,
    normalized_mutual_info,
    rand_scores,
)
from .partition import ContingencyTable, Partition, contingency
from .overlap import OverlapSimConfig, monte_carlo_disjoint, p_disjoint_approx, p_disjoint_exact


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float | str
    expected: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: measured={self.measured} expected {self.expected}"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "expected": self.expected,
        }


def _close(name: str, measured: float, target: float, tol: float) -> CheckResult:
    return CheckResult(
        name, abs(measured - target) <= tol, round(float(measured), 6), f"{target} +- {tol}"
    )


def _flag(name: str, ok: bool, measured, expected: str) -> CheckResult:
    return CheckResult(name, bool(ok), measured, expected)


#: The ideal contingency table of the three-blob clustering against the
#: two-class labels of the split-class benchmark, and its exact scores.
IDEAL_TABLE = ((800, 0), (0, 1000), (0, 1200))
IDEAL_SCORES = {"mi": 0.580, "nmi": 0.697, "ami": 0.696, "ari": 0.501}
IDEAL_TOLS = {"mi": 0.002, "nmi": 0.003, "ami": 0.004, "ari": 0.002}


def ideal_table_checks() -> list[CheckResult]:
    t = ContingencyTable.from_counts(np.array(IDEAL_TABLE))
    measured = {
        "mi": mutual_info(t),
        "nmi": normalized_mutual_info(t),
        "ami": adjusted_mutual_info(t),
        "ari": rand_scores(t).ari,
    }
    return [
        _close(f"ideal contingency {name}", measured[name], IDEAL_SCORES[name], IDEAL_TOLS[name])
        for name in ("mi", "nmi", "ami", "ari")
    ]


#: The parameter grid of the table1 sweep: k-means k in {1,2,3} and DBSCAN
#: eps from 0.010 to 0.040 in steps of 0.005 at min_pts 4.
TABLE1_GRID = [SweepCell("kmeans", {"k": k}) for k in (1, 2, 3)] + [
    SweepCell("dbscan", {"eps": round(0.010 + 0.005 * i, 3), "min_pts": 4}) for i in range(7)
]


def reproduce_table1(seed: int = 0) -> list[CheckResult]:
    checks = ideal_table_checks()
    ds = preset_sd2(seed)
    config = AuditConfig(seed=seed)
    km2 = Partition.from_labels(KMeans(2, random_state=seed).fit(ds.X).labels_)
    km3 = Partition.from_labels(KMeans(3, random_state=seed).fit(ds.X).labels_)
    r2 = evaluate(ds.X, km2, ds.labels)
    r3 = evaluate(ds.X, km3, ds.labels)
    checks.append(_flag("k-means k=2 ARI=NMI=AMI=1", r2.ari == r2.nmi == r2.ami == 1.0,
                        f"ari={r2.ari:.4f} nmi={r2.nmi:.4f} ami={r2.ami:.4f}", "all exactly 1.0"))
    for name in ("mi", "nmi", "ami", "ari"):
        checks.append(_close(f"k-means k=3 {name}", getattr(r3, name), IDEAL_SCORES[name], 0.02))
    checks.append(_flag("DBI(k=3) < DBI(k=2)", r3.dbi < r2.dbi,
                        f"{r3.dbi:.3f} vs {r2.dbi:.3f}", "strictly smaller"))
    checks.append(_flag("SC(k=3) > SC(k=2)", r3.sc > r2.sc,
                        f"{r3.sc:.3f} vs {r2.sc:.3f}", "strictly larger"))
    db = Partition.from_labels(DBSCAN(eps=0.025, min_pts=4).fit(ds.X).labels_)
    ari_db = rand_scores(contingency(db, km3)).ari
    checks.append(_flag("DBSCAN(0.025, 4) matches k=3 partition", ari_db >= 0.99,
                        f"ari={ari_db:.4f}", "ARI >= 0.99"))
    noise_frac = db.n_noise / ds.n
    checks.append(_flag("DBSCAN(0.025, 4) noise", noise_frac <= 0.01,
                        f"{noise_frac:.4f}", "<= 1%"))
    sw = sweep(ds.X, ds.labels, TABLE1_GRID, config)
    checks.append(_flag("sweep inconsistency flag", sw.inconsistent, sw.inconsistent, "True"))
    return checks


def reproduce_table2_analog(seed: int = 0) -> list[CheckResult]:
    ds = preset_overlap_pair(seed)
    checks = []
    eps = suggest_eps(k_dist_curve(ds.X, 4)).eps
    db = Partition.from_labels(DBSCAN(eps=eps, min_pts=4).fit(ds.X).labels_)
    largest = db.sizes.max() / ds.n if db.k else 0.0
    checks.append(_flag("DBSCAN at suggested eps merges the data", largest >= 0.95,
                        f"largest cluster fraction={largest:.3f}", ">= 0.95 in one cluster"))
    km1 = Partition.from_labels(KMeans(1, random_state=seed).fit(ds.X).labels_)
    r1 = evaluate(ds.X, km1, ds.labels)
    checks.append(_flag("k-means k=1 external scores", (r1.ari, r1.ami, r1.nmi, r1.mi) == (0.0, 0.0, 0.0, 0.0),
                        f"ari={r1.ari} ami={r1.ami} nmi={r1.nmi} mi={r1.mi}", "all exactly 0"))
    checks.append(_flag("k-means k=1 internal scores undefined", r1.dbi is None and r1.sc is None,
                        "dbi=sc=None" if r1.dbi is None else f"dbi={r1.dbi}", "undefined below 2 clusters"))
    km2 = Partition.from_labels(KMeans(2, random_state=seed).fit(ds.X).labels_)
    r2 = evaluate(ds.X, km2, ds.labels)
    checks.append(_flag("k-means k=2 ARI moderate", 0.0 < r2.ari < 0.8,
                        f"ari={r2.ari:.3f}", "in (0, 0.8)"))
    report = audit(ds.X, ds.labels, AuditConfig(seed=seed))
    checks.append(_flag("audit verdict", report.verdict in ("overlap-detected", "both"),
                        report.verdict, "overlap detected"))
    return checks


def reproduce_table3_analog(seed: int = 0) -> list[CheckResult]:
    ds = preset_split_class(seed)
    checks = []
    labels_part = Partition.from_labels(ds.labels)
    km2 = Partition.from_labels(KMeans(2, random_state=seed).fit(ds.X).labels_)
    r_lab = evaluate(ds.X, labels_part)
    r_km = evaluate(ds.X, km2, ds.labels)
    checks.append(_flag("k-means k=2 ARI near zero", r_km.ari < 0.1,
                        f"ari={r_km.ari:.3f}", "< 0.1"))
    checks.append(_flag("DBI(clustering) < DBI(labels)", r_km.dbi < r_lab.dbi,
                        f"{r_km.dbi:.3f} vs {r_lab.dbi:.3f}", "strictly smaller"))
    checks.append(_flag("SC(clustering) > SC(labels)", r_km.sc > r_lab.sc,
                        f"{r_km.sc:.3f} vs {r_lab.sc:.3f}", "strictly larger"))
    report = audit(ds.X, ds.labels, AuditConfig(seed=seed))
    split_classes = [e.class_name for e in report.splits if e.flagged]
    checks.append(_flag("split class flagged", split_classes == ["1"],
                        f"flagged={split_classes}", "exactly class 1"))
    checks.append(_flag("audit verdict", report.verdict in ("split-detected", "both"),
                        report.verdict, "split detected"))
    return checks


FIG6_MC_KS = (2, 10, 30, 50, 100)


def reproduce_fig6(seed: int = 0, trials: int = 10_000) -> list[CheckResult]:
    r, w = 0.01, 1.0
    checks = []
    gaps = [abs(p_disjoint_approx(k, r, w) - p_disjoint_exact(k, r, w)) for k in range(1, 101)]
    checks.append(_flag("approx vs exact, k <= 100", max(gaps) < 1e-3,
                        f"max gap={max(gaps):.2e}", "< 1e-3"))
    exact = [p_disjoint_exact(k, r, w) for k in range(2, 101)]
    monotone = all(a >= b for a, b in zip(exact, exact[1:]))
    checks.append(_flag("curve monotone decreasing in k", monotone, monotone, "True"))
    for k in FIG6_MC_KS:
        est, _ = monte_carlo_disjoint(OverlapSimConfig(k=k, r=r, w=w, trials=trials, seed=seed))
        checks.append(_close(f"monte carlo vs closed form, k={k}", est, p_disjoint_exact(k, r, w), 0.02))
    return checks


TARGETS = {
    "table1": reproduce_table1,
    "table2-analog": reproduce_table2_analog,
    "table3-analog": reproduce_table3_analog,
    "fig6": reproduce_fig6,
}


def run_target(target: str, seed: int = 0) -> list[CheckResult]:
    if target not in TARGETS:
        raise ValueError(
            f"unknown reproduce target {target!r}; valid targets: {', '.join(sorted(TARGETS))}"
        )
    return TARGETS[target](seed)

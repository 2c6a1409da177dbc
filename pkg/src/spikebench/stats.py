"""Seed-level aggregation and paired nonparametric statistics.

Seeds are the unit of replication throughout: accuracies are summarized as
mean, sample standard deviation and a z-based 95% CI half-width
(1.96 * std / sqrt(n)), and seed-matched comparisons get an exact two-sided
sign test, Cohen's dz and Cliff's delta.  Classification quality uses
row-normalized confusion matrices and unweighted macro F1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

Z_95 = 1.96


@dataclass(frozen=True)
class Summary:
    n: int
    mean: float
    std: float       # sample std, n-1 denominator; 0.0 when n == 1
    ci_half: float   # 1.96 * std / sqrt(n)

    @property
    def degenerate(self) -> bool:
        return self.n < 2


def summarize(values: Sequence[float]) -> Summary:
    """Mean / sample std / 95% CI half-width of a list of reals."""
    vals = np.asarray(list(values), dtype=np.float64)
    if vals.size == 0:
        raise ValueError("cannot summarize an empty list")
    mean = float(vals.mean())
    std = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
    return Summary(
        n=int(vals.size),
        mean=mean,
        std=std,
        ci_half=Z_95 * std / math.sqrt(vals.size),
    )


def sign_test_exact(diffs: Sequence[float]) -> float:
    """Two-sided exact sign test p-value; exact-zero ties are dropped.

    With all pairs tied there is no evidence either way and p is 1.
    """
    signs = [d for d in diffs if d != 0.0]
    m = len(signs)
    if m == 0:
        return 1.0
    k = sum(1 for d in signs if d > 0.0)
    t = min(k, m - k)
    tail = sum(math.comb(m, i) for i in range(t + 1))
    return min(1.0, 2.0 * tail / 2.0**m)


def cohens_dz(diffs: Sequence[float]) -> float:
    """Paired effect size: mean of differences over their sample std."""
    vals = np.asarray(list(diffs), dtype=np.float64)
    if vals.size < 2:
        raise ValueError("cohens_dz needs at least 2 paired differences")
    sd = float(vals.std(ddof=1))
    if sd == 0.0:
        raise ValueError("cohens_dz undefined for zero-variance differences")
    return float(vals.mean()) / sd


def cliffs_delta(a: Sequence[float], b: Sequence[float]) -> float:
    """Dominance statistic over all cross pairs, in [-1, 1]."""
    xs = np.asarray(list(a), dtype=np.float64)
    ys = np.asarray(list(b), dtype=np.float64)
    if xs.size == 0 or ys.size == 0:
        raise ValueError("cliffs_delta needs two nonempty samples")
    gt = int((xs[:, None] > ys[None, :]).sum())
    lt = int((xs[:, None] < ys[None, :]).sum())
    return (gt - lt) / (xs.size * ys.size)


@dataclass(frozen=True)
class PairedResult:
    """Seed-matched comparison of condition a minus condition b."""

    n_pairs: int
    n_nonties: int
    mean_diff: float
    sign_p: float
    dz: float            # nan when differences have zero variance
    cliffs: float
    ci_half: float       # z-based CI half-width of the paired differences


def paired_compare(a: Sequence[float], b: Sequence[float]) -> PairedResult:
    """Full paired panel for two seed-aligned accuracy lists."""
    xs = list(a)
    ys = list(b)
    if len(xs) != len(ys):
        raise ValueError("paired_compare needs equal-length seed-aligned lists")
    diffs = [x - y for x, y in zip(xs, ys)]
    summary = summarize(diffs)
    try:
        dz = cohens_dz(diffs)
    except ValueError:
        dz = float("nan")
    return PairedResult(
        n_pairs=len(diffs),
        n_nonties=sum(1 for d in diffs if d != 0.0),
        mean_diff=summary.mean,
        sign_p=sign_test_exact(diffs),
        dz=dz,
        cliffs=cliffs_delta(xs, ys),
        ci_half=summary.ci_half,
    )


def confusion_matrix(
    true_labels: Sequence[int], predicted: Sequence[int], classes: int
) -> np.ndarray:
    """Row-normalized confusion matrix; rows of absent classes stay zero."""
    t = np.asarray(list(true_labels), dtype=np.int64)
    p = np.asarray(list(predicted), dtype=np.int64)
    if t.shape != p.shape:
        raise ValueError("label vectors must have equal length")
    if t.size and (t.min() < 0 or t.max() >= classes or p.min() < 0 or p.max() >= classes):
        raise ValueError("label outside [0, classes)")
    counts = np.zeros((classes, classes), dtype=np.float64)
    np.add.at(counts, (t, p), 1.0)
    totals = counts.sum(axis=1, keepdims=True)
    return np.divide(counts, totals, out=np.zeros_like(counts), where=totals > 0)


def per_class_f1(
    true_labels: Sequence[int], predicted: Sequence[int], classes: int
) -> np.ndarray:
    """F1 per class; 0 where precision + recall is 0."""
    t = np.asarray(list(true_labels), dtype=np.int64)
    p = np.asarray(list(predicted), dtype=np.int64)
    if t.shape != p.shape:
        raise ValueError("label vectors must have equal length")
    f1 = np.zeros(classes)
    for c in range(classes):
        tp = int(((t == c) & (p == c)).sum())
        fp = int(((t != c) & (p == c)).sum())
        fn = int(((t == c) & (p != c)).sum())
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        if precision + recall > 0.0:
            f1[c] = 2.0 * precision * recall / (precision + recall)
    return f1


def macro_f1(
    true_labels: Sequence[int], predicted: Sequence[int], classes: int
) -> tuple[float, np.ndarray]:
    """Unweighted mean of per-class F1, plus the per-class vector."""
    f1 = per_class_f1(true_labels, predicted, classes)
    return float(f1.mean()), f1

"""Task-standard fit measured with signal detection: technomarkers, confusion
counts, ROC curves, AUC and cut-off calibration.

The decision rule applies the standard to a task when its marker is at or
above the cut-off.  A marker that works the other way round should be
negated before use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from . import kernels
from .model import Implementation, Standard, Task, common_core


class DegeneratePopulationError(ValueError):
    """Raised when a population lacks one of the two classes."""


class LabeledSample(NamedTuple):
    marker: float
    suitable: bool


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def sensitivity(self) -> float:
        return _ratio(self.tp, self.tp + self.fn)

    recall = sensitivity
    tpr = sensitivity

    @property
    def specificity(self) -> float:
        return _ratio(self.tn, self.tn + self.fp)

    @property
    def fpr(self) -> float:
        return _ratio(self.fp, self.fp + self.tn)

    @property
    def precision(self) -> float:
        return _ratio(self.tp, self.tp + self.fp)


def _ratio(num, den):
    return num / den if den else 0.0


class RocPoint(NamedTuple):
    fpr: float
    tpr: float
    cutoff: float


@dataclass(frozen=True)
class RocCurve:
    points: Tuple[RocPoint, ...]
    auc: float
    n_pos: int
    n_neg: int


def technomarker_core_coverage(task: Task, a: Implementation, b: Implementation,
                               standard: Standard) -> float:
    """Fraction of required concepts in the pair's common core that the standard defines."""
    if not task.required:
        raise ValueError("task has no required concepts")
    core = common_core(a.model, b.model)
    std = standard.model.entries
    hit = sum(1 for c in task.required if c in core and c in std)
    return hit / len(task.required)


def label_suitability(task: Task, a: Implementation, b: Implementation,
                      standard: Standard) -> bool:
    """Gold label: the standard alone completes the task (both agents conform on every
    required concept)."""
    std = standard.model.entries
    ea, eb = a.model.entries, b.model.entries
    for c in task.required:
        t = std.get(c)
        if t is None or ea.get(c) != t or eb.get(c) != t:
            return False
    return True


def _arrays(samples):
    if not samples:
        raise ValueError("sample list is empty")
    markers = np.fromiter((s[0] for s in samples), dtype=np.float64, count=len(samples))
    labels = np.fromiter((bool(s[1]) for s in samples), dtype=bool, count=len(samples))
    if not np.all(np.isfinite(markers)):
        raise ValueError("markers must be finite")
    return markers, labels


def confusion_at_cutoff(samples: Sequence[LabeledSample], cutoff: float) -> ConfusionCounts:
    markers, labels = _arrays(samples)
    applied = markers >= cutoff
    tp = int(np.count_nonzero(applied & labels))
    fp = int(np.count_nonzero(applied & ~labels))
    fn = int(np.count_nonzero(~applied & labels))
    tn = int(np.count_nonzero(~applied & ~labels))
    return ConfusionCounts(tp, fp, tn, fn)


def _require_both_classes(labels):
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegeneratePopulationError(
            "need at least one suitable and one unsuitable sample (AUC undefined)")
    return n_pos, n_neg


def roc_curve(samples: Sequence[LabeledSample]) -> RocCurve:
    """ROC over cut-offs +inf, the midpoints between distinct markers, and -inf.

    AUC is the trapezoid rule, evaluated in integer arithmetic before the
    final division.
    """
    markers, labels = _arrays(samples)
    n_pos, n_neg = _require_both_classes(labels)
    order = np.argsort(-markers, kind="stable")
    values, tps, fps = kernels.roc_counts(
        np.ascontiguousarray(markers[order]),
        np.ascontiguousarray(labels[order], dtype=np.int8))
    cutoffs = [math.inf]
    cutoffs += [(values[k] + values[k + 1]) / 2 for k in range(len(values) - 1)]
    cutoffs.append(-math.inf)
    points = tuple(RocPoint(fp / n_neg, tp / n_pos, cut)
                   for tp, fp, cut in zip(tps, fps, cutoffs))
    twice_area = 0
    for k in range(1, len(tps)):
        twice_area += (fps[k] - fps[k - 1]) * (tps[k] + tps[k - 1])
    return RocCurve(points, twice_area / (2 * n_pos * n_neg), n_pos, n_neg)


def auc_pair_count(samples: Sequence[LabeledSample]) -> float:
    """P(marker of a random suitable task > that of a random unsuitable one), ties half."""
    markers, labels = _arrays(samples)
    n_pos, n_neg = _require_both_classes(labels)
    twice = kernels.auc_pair_twice(np.ascontiguousarray(markers[labels]),
                                   np.ascontiguousarray(markers[~labels]))
    return twice / (2 * n_pos * n_neg)


def optimal_cutoff(curve: RocCurve, criterion: str = "youden", cost_ratio: float = 1.0) -> float:
    """Calibrate the cut-off on a curve.

    ``youden`` maximizes tpr - fpr.  ``min_error`` minimizes
    ``cost_ratio * FP + FN`` in counts.  Ties go to the lower cut-off, which
    applies the standard more widely.
    """
    if criterion in ("youden",):
        def score(p):
            return p.tpr - p.fpr
    elif criterion in ("min_error", "min-error"):
        if cost_ratio < 0:
            raise ValueError("cost_ratio must be >= 0")

        def score(p):
            fp = p.fpr * curve.n_neg
            fn = (1.0 - p.tpr) * curve.n_pos
            return -(cost_ratio * fp + fn)
    else:
        raise ValueError(f"unknown criterion {criterion!r}")
    best = None
    for p in curve.points:
        s = score(p)
        # points run from high cut-off to low, so a tie moves to the lower one
        if best is None or s > best[0] + 1e-12:
            best = (s, p.cutoff)
        elif abs(s - best[0]) <= 1e-12:
            best = (max(s, best[0]), p.cutoff)
    return best[1]


def samples_from_pairs(pairs: Sequence[Tuple[float, bool]]) -> List[LabeledSample]:
    return [LabeledSample(float(m), bool(s)) for m, s in pairs]

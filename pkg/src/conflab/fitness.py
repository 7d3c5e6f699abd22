"""Outcome-side measures: performance curves over the technomarker axis, the
IF/AF/MF decomposition and the derived PF, RF, FI and expected utility."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .model import Implementation, Standard, TaskPopulation, evaluate_interop
from .sdt import technomarker_core_coverage


@dataclass(frozen=True)
class PerformanceCurve:
    """Step function of success probability over a closed marker interval.

    ``segments`` is a tuple of ``(start, end, probability)`` in order; the
    segments tile ``domain`` without gaps.
    """

    domain: Tuple[float, float]
    segments: Tuple[Tuple[float, float, float], ...]

    def __post_init__(self):
        lo, hi = self.domain
        if not hi > lo:
            raise ValueError("domain must have positive width")
        if not self.segments:
            raise ValueError("curve needs at least one segment")
        edge = lo
        for start, end, p in self.segments:
            if start != edge or not end > start:
                raise ValueError(f"segments must tile the domain (break at {start})")
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} outside [0, 1]")
            edge = end
        if edge != hi:
            raise ValueError("segments do not reach the end of the domain")

    @classmethod
    def from_steps(cls, edges: Sequence[float], probs: Sequence[float]) -> "PerformanceCurve":
        if len(edges) != len(probs) + 1:
            raise ValueError("need one more edge than probabilities")
        segs = tuple((float(edges[i]), float(edges[i + 1]), float(probs[i]))
                     for i in range(len(probs)))
        return cls((float(edges[0]), float(edges[-1])), segs)

    @property
    def edges(self) -> np.ndarray:
        return np.array([s[0] for s in self.segments] + [self.segments[-1][1]])

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([s[2] for s in self.segments])

    @property
    def area(self) -> float:
        return float(sum((e - s) * p for s, e, p in self.segments))


@dataclass(frozen=True)
class FitnessDecomposition:
    intrinsic_if: float
    additional_af: float
    missing_mf: float


def performance_curve(impl: Implementation, partner: Implementation, templates: TaskPopulation,
                      standard: Standard, bins: int, rng: Optional[np.random.Generator] = None,
                      n_samples: Optional[int] = None) -> PerformanceCurve:
    """Empirical success rate per technomarker bin on [0, 1].

    Every template is evaluated once unless ``n_samples`` is given, in which
    case that many templates are drawn with replacement from ``rng``.
    Bins with no tasks carry probability 0.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    tasks = list(templates)
    if not tasks:
        raise ValueError("task population is empty")
    if n_samples is not None:
        if rng is None:
            raise ValueError("n_samples requires rng")
        tasks = [tasks[i] for i in rng.integers(len(tasks), size=n_samples)]
    hits = np.zeros(bins)
    seen = np.zeros(bins)
    for task in tasks:
        marker = technomarker_core_coverage(task, impl, partner, standard)
        k = min(int(marker * bins), bins - 1)
        seen[k] += 1
        hits[k] += evaluate_interop(impl, partner, task).success
    probs = np.divide(hits, seen, out=np.zeros(bins), where=seen > 0)
    return PerformanceCurve.from_steps(np.linspace(0.0, 1.0, bins + 1), probs)


def fitness_decomposition(reference: PerformanceCurve,
                          implemented: PerformanceCurve) -> FitnessDecomposition:
    """IF is the area under min(ref, impl); AF the area where impl is above ref; MF where below."""
    if reference.domain != implemented.domain:
        raise ValueError(f"curve domains differ: {reference.domain} vs {implemented.domain}")
    common, excess, shortfall = kernels.step_overlap(
        np.ascontiguousarray(reference.edges, dtype=np.float64),
        np.ascontiguousarray(reference.probabilities, dtype=np.float64),
        np.ascontiguousarray(implemented.edges, dtype=np.float64),
        np.ascontiguousarray(implemented.probabilities, dtype=np.float64))
    return FitnessDecomposition(common, excess, shortfall)


def potential_fitness(d: FitnessDecomposition) -> float:
    return d.intrinsic_if + d.additional_af + d.missing_mf


def realized_fitness(d: FitnessDecomposition) -> float:
    return d.additional_af - d.missing_mf


def fidelity(d: FitnessDecomposition) -> float:
    return d.intrinsic_if - (d.additional_af + d.missing_mf)


def expected_utility(v: float, p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if v < 0:
        raise ValueError(f"v must be >= 0, got {v}")
    return v * p

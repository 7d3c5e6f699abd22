"""Stochastic sources of variation: task drift, implementation drift, quality
errors and residual-category growth.

Every step takes an explicit ``numpy.random.Generator`` and is a pure
function of (input, generator state).  At most one mutation per entity per
call.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from .model import (
    CommonModel,
    Implementation,
    Standard,
    TaskPopulation,
    fresh_token,
)


@dataclass(frozen=True)
class DriftParams:
    p_task_drift: float = 0.0
    p_impl_drift: float = 0.0
    p_defect: float = 0.0
    residual_threshold: int = 5

    def __post_init__(self):
        for name in ("p_task_drift", "p_impl_drift", "p_defect"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.residual_threshold < 1:
            raise ValueError("residual_threshold must be >= 1")


@dataclass(frozen=True)
class ResidualBucket:
    """Occurrence counts of concepts the standard could not classify."""

    counts: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if any(v <= 0 for v in self.counts.values()):
            raise ValueError("residual counts must be strictly positive")

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def step_task_drift(population: TaskPopulation, params: DriftParams,
                    rng: np.random.Generator) -> TaskPopulation:
    """Each template independently gains or loses one required concept.

    A removal on a single-concept template is a no-op; a gain when the
    universe is exhausted is a no-op.
    """
    tasks = population.tasks
    n = len(tasks)
    if n == 0:
        return population
    fires = rng.random(n) < params.p_task_drift
    if not fires.any():
        return population
    universe = population.universe
    out = list(tasks)
    for i in np.flatnonzero(fires):
        task = tasks[i]
        gain = rng.random() < 0.5
        pick = rng.random()
        req = task.required
        if gain:
            if population.weights is None:
                pool = [c for c in universe if c not in req]
                if pool:
                    out[i] = replace(task, required=req | {pool[int(pick * len(pool))]})
            else:
                pool = [(c, w) for c, w in zip(universe, population.weights) if c not in req]
                total = sum(w for _, w in pool)
                if pool and total > 0:
                    target = pick * total
                    acc = 0.0
                    chosen = pool[-1][0]
                    for c, w in pool:
                        acc += w
                        if target < acc:
                            chosen = c
                            break
                    out[i] = replace(task, required=req | {chosen})
        elif len(req) > 1:
            ordered = sorted(req)
            out[i] = replace(task, required=req - {ordered[int(pick * len(ordered))]})
    return TaskPopulation(tuple(out), universe, population.weights)


def step_impl_drift(impl: Implementation, params: DriftParams, rng: np.random.Generator,
                    extension_ids: Optional[Sequence[int]] = None) -> Implementation:
    """With ``p_impl_drift``, re-token one entry or add one extension (50/50).

    ``extension_ids`` is the pool new extensions come from; it defaults to
    the 64 ids above the model's current maximum.
    """
    if rng.random() >= params.p_impl_drift:
        return impl
    mutate = rng.random() < 0.5
    pick = rng.random()
    token = fresh_token(rng)
    entries = impl.model.entries
    if extension_ids is None:
        top = max(entries, default=-1) + 1
        extension_ids = range(top, top + 64)
    if mutate and not entries:
        mutate = False
    if not mutate:
        pool = [c for c in extension_ids if c not in entries]
        if not pool:
            if not entries:
                return impl
            mutate = True
    new = dict(entries)
    if mutate:
        ordered = sorted(entries)
        c = ordered[int(pick * len(ordered))]
        new[c] = token
        conformed, variants = impl.conformed, impl.variants
        if c in conformed:
            conformed = conformed - {c}
            variants = variants | {c}
        return replace(impl, model=CommonModel(new, impl.model.version + 1),
                       conformed=conformed, variants=variants)
    c = pool[int(pick * len(pool))]
    new[c] = token
    return replace(impl, model=CommonModel(new, impl.model.version + 1),
                   extensions=impl.extensions | {c})


def record_residual(bucket: ResidualBucket, unknown: int) -> ResidualBucket:
    counts = dict(bucket.counts)
    counts[unknown] = counts.get(unknown, 0) + 1
    return ResidualBucket(counts)


def spawn_from_residual(bucket: ResidualBucket, standard: Standard, threshold: int,
                        rng: Optional[np.random.Generator] = None):
    """Promote residual concepts seen at least ``threshold`` times into the standard.

    Returns ``(standard, bucket)``; the version bumps once if anything spawned.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    ready = sorted(c for c, n in bucket.counts.items() if n >= threshold)
    if not ready:
        return standard, bucket
    if rng is None:
        rng = np.random.default_rng([standard.standard_id, standard.version])
    updates = {c: fresh_token(rng) for c in ready if c not in standard.model.entries}
    remaining = {c: n for c, n in bucket.counts.items() if n < threshold}
    if not updates:
        return standard, ResidualBucket(remaining)
    return standard.revise(updates), ResidualBucket(remaining)


def apply_defects(before: Standard, after: Standard, p_defect: float,
                  rng: np.random.Generator) -> Standard:
    """Quality errors: each entry written by a revision is mis-published with ``p_defect``.

    The wrong token replaces the intended one in the same version.
    """
    if after is before or p_defect <= 0.0:
        return after
    old = before.model.entries
    written = sorted(c for c, t in after.model.entries.items() if old.get(c) != t)
    if not written:
        return after
    hits = rng.random(len(written)) < p_defect
    if not hits.any():
        return after
    entries = dict(after.model.entries)
    for c, hit in zip(written, hits):
        if hit:
            entries[c] = fresh_token(rng)
    return replace(after, model=CommonModel(entries, after.model.version))


def divergence(standard: Standard, impl: Implementation) -> float:
    """Size of the entry-set symmetric difference, relative to the standard's size."""
    std = standard.model.entries
    if not std:
        raise ValueError("standard is empty")
    mine = impl.model.entries
    diff = 0
    for c, t in std.items():
        u = mine.get(c)
        if u is None:
            diff += 1
        elif u != t:
            diff += 2
    diff += sum(1 for c in mine if c not in std)
    return diff / len(std)

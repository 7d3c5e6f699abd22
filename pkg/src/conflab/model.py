"""Common models, standards, agent implementations and the interoperation check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Protocol, Sequence

import numpy as np

# Standard tokens live below FRESH_TOKEN_BASE; fresh (variant/extension)
# tokens are drawn above it so they never collide with a published token.
FRESH_TOKEN_BASE = 2**31
FRESH_TOKEN_LIMIT = 2**62


def fresh_token(rng: np.random.Generator) -> int:
    return int(rng.integers(FRESH_TOKEN_BASE, FRESH_TOKEN_LIMIT))


@dataclass(frozen=True)
class CommonModel:
    """Association from concept id to representation token."""

    entries: Mapping[int, int] = field(default_factory=dict)
    version: int = 0

    def __post_init__(self):
        if self.version < 0:
            raise ValueError("version must be non-negative")

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, concept: int) -> bool:
        return concept in self.entries

    def get(self, concept: int) -> Optional[int]:
        return self.entries.get(concept)

    def keys(self) -> frozenset:
        return frozenset(self.entries)

    def revised(self, updates: Mapping[int, int]) -> "CommonModel":
        merged = dict(self.entries)
        merged.update(updates)
        return CommonModel(merged, self.version + 1)


@dataclass(frozen=True)
class Standard:
    model: CommonModel
    standard_id: int = 0
    version: int = 0

    @property
    def concepts(self) -> frozenset:
        return self.model.keys()

    def __len__(self) -> int:
        return len(self.model)

    def revise(self, updates: Mapping[int, int]) -> "Standard":
        """Return the next version with ``updates`` written in (no-op if empty)."""
        if not updates:
            return self
        return Standard(self.model.revised(updates), self.standard_id, self.version + 1)


@dataclass(frozen=True)
class Implementation:
    """An agent's effective model, partitioned against the standard it was derived from.

    ``conformed`` holds concepts whose token equals the base standard's,
    ``variants`` concepts present in the standard with a different token,
    ``extensions`` concepts the standard does not define.
    """

    agent_id: int
    base_standard: tuple  # (standard_id, version)
    model: CommonModel
    conformed: frozenset
    variants: frozenset
    extensions: frozenset

    @classmethod
    def classify(cls, agent_id: int, standard: Standard, entries: Mapping[int, int],
                 version: int = 0) -> "Implementation":
        std = standard.model.entries
        conformed, variants, extensions = [], [], []
        for c, t in entries.items():
            s = std.get(c)
            if s is None:
                extensions.append(c)
            elif s == t:
                conformed.append(c)
            else:
                variants.append(c)
        return cls(
            agent_id,
            (standard.standard_id, standard.version),
            CommonModel(entries, version),
            frozenset(conformed),
            frozenset(variants),
            frozenset(extensions),
        )

    def check_partition(self, standard: Optional[Standard] = None) -> None:
        """Raise AssertionError if the partition invariant is broken."""
        keys = self.model.keys()
        parts = (self.conformed, self.variants, self.extensions)
        assert not (self.conformed & self.variants), "conformed/variants overlap"
        assert not (self.conformed & self.extensions), "conformed/extensions overlap"
        assert not (self.variants & self.extensions), "variants/extensions overlap"
        assert frozenset().union(*parts) == keys, "partition does not cover model"
        if standard is not None:
            for c in self.conformed:
                assert self.model.entries[c] == standard.model.entries[c]


@dataclass(frozen=True)
class Task:
    required: frozenset
    utility_v: float = 1.0
    template_id: int = 0

    def __post_init__(self):
        if not self.required:
            raise ValueError("task must require at least one concept")
        if self.utility_v < 0:
            raise ValueError("utility_v must be non-negative")


@dataclass(frozen=True)
class TaskPopulation:
    """Task templates plus the concept universe drift may draw from.

    ``weights``, when given, is the relative popularity of each universe
    concept and biases which concept a template gains.
    """

    tasks: tuple
    universe: tuple = ()
    weights: Optional[tuple] = None

    def __len__(self) -> int:
        return len(self.tasks)

    def __iter__(self):
        return iter(self.tasks)


@dataclass(frozen=True)
class InteropOutcome:
    success: bool
    agreed: frozenset
    disagreed: frozenset
    missing: frozenset

    @property
    def degree(self) -> float:
        """Graded interoperability, |agreed| / |required|."""
        total = len(self.agreed) + len(self.disagreed) + len(self.missing)
        return len(self.agreed) / total if total else 1.0


@dataclass(frozen=True)
class GapReport:
    gap_concepts: frozenset
    kind: str

    @property
    def gap_size(self) -> int:
        return len(self.gap_concepts)


class Translator(Protocol):
    def maps(self, src_agent: int, dst_agent: int, concept: int,
             src_token: int, dst_token: int) -> bool: ...


class MappingTable:
    """Static translator: (concept, source token) -> target token, for any agent pair."""

    def __init__(self, table: Optional[Mapping[tuple, int]] = None):
        self.table = dict(table or {})

    def maps(self, src_agent, dst_agent, concept, src_token, dst_token):
        return self.table.get((concept, src_token)) == dst_token


def make_standard(concept_count: int, seed: int, standard_id: int = 0) -> Standard:
    if concept_count < 1:
        raise ValueError("concept_count must be >= 1")
    rng = np.random.default_rng(seed)
    tokens = rng.integers(0, FRESH_TOKEN_BASE, size=concept_count)
    return Standard(CommonModel({c: int(t) for c, t in enumerate(tokens)}, 0), standard_id, 0)


@dataclass(frozen=True)
class VariationParams:
    """Per-concept omission/variant probabilities and the extension rate."""

    p_omit: float = 0.0
    p_variant: float = 0.0
    p_extend: float = 0.0

    def __post_init__(self):
        for name in ("p_omit", "p_variant", "p_extend"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")


def derive_implementation(standard: Standard, params: VariationParams, seed: int,
                          agent_id: int = 0,
                          extension_ids: Optional[Sequence[int]] = None) -> Implementation:
    """Draw an agent implementation from ``standard``.

    Extension ids default to the block of ``len(standard)`` ids just above
    the standard's highest concept.
    """
    if not isinstance(params, VariationParams):
        params = VariationParams(**params)
    rng = np.random.default_rng(seed)
    concepts = sorted(standard.model.entries)
    n = len(concepts)
    u_omit = rng.random(n)
    u_var = rng.random(n)
    std = standard.model.entries
    entries = {}
    for i, c in enumerate(concepts):
        if u_omit[i] < params.p_omit:
            continue
        if u_var[i] < params.p_variant:
            entries[c] = fresh_token(rng)
        else:
            entries[c] = std[c]
    if extension_ids is None:
        top = (concepts[-1] + 1) if concepts else 0
        extension_ids = range(top, top + n)
    pool = [c for c in extension_ids if c not in std]
    k = min(int(rng.binomial(n, params.p_extend)) if n else 0, len(pool))
    if k:
        for idx in sorted(rng.choice(len(pool), size=k, replace=False)):
            entries[pool[idx]] = fresh_token(rng)
    return Implementation.classify(agent_id, standard, entries)


def common_core(a: CommonModel, b: CommonModel) -> frozenset:
    ea, eb = a.entries, b.entries
    if len(eb) < len(ea):
        ea, eb = eb, ea
    return frozenset(c for c, t in ea.items() if eb.get(c, -1) == t)


def evaluate_interop(a: Implementation, b: Implementation, task: Task,
                     translator: Optional[Translator] = None) -> InteropOutcome:
    ea, eb = a.model.entries, b.model.entries
    agreed, disagreed, missing = [], [], []
    for c in task.required:
        ta = ea.get(c)
        tb = eb.get(c)
        if ta is None or tb is None:
            missing.append(c)
        elif ta == tb or (translator is not None
                          and translator.maps(a.agent_id, b.agent_id, c, ta, tb)):
            agreed.append(c)
        else:
            disagreed.append(c)
    return InteropOutcome(not disagreed and not missing,
                          frozenset(agreed), frozenset(disagreed), frozenset(missing))


def practice_gap(standard: Standard, tasks: Iterable[Task]) -> GapReport:
    tasks = list(tasks)
    if not tasks:
        raise ValueError("task population is empty")
    std = standard.model.entries
    gap = set()
    for t in tasks:
        gap.update(c for c in t.required if c not in std)
    return GapReport(frozenset(gap), "practice_gap")


def interoperability_gap(a: Implementation, b: Implementation, task: Task) -> GapReport:
    ea, eb = a.model.entries, b.model.entries
    gap = frozenset(c for c in task.required
                    if c not in ea or c not in eb or ea[c] != eb[c])
    return GapReport(gap, "interoperability_gap")

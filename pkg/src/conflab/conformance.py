"""Conformance services (universal sync, mediating adaptor, pairwise grounding),
the incremental 80/20 revision rule and regime-based strategy selection."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .model import (
    Implementation,
    InteropOutcome,
    Standard,
    Task,
    evaluate_interop,
    interoperability_gap,
)

UNIVERSAL = "universal"
MEDIATED = "mediated"
LOCALIZED = "localized"
STRATEGIES = (UNIVERSAL, MEDIATED, LOCALIZED)

# Ledger categories, in serialization order.
AHEAD_OF_TIME = ("sync", "revision")
TASK_TIME = ("map_discover", "map_apply", "ground_exchange", "failure")
CATEGORIES = AHEAD_OF_TIME + TASK_TIME


@dataclass(frozen=True)
class CostParams:
    c_sync: float = 1.0
    c_map_discover: float = 1.0
    c_map_apply: float = 0.0
    c_ground_exchange: float = 1.0
    c_revision: float = 0.0
    c_failure: float = 1.0

    def __post_init__(self):
        for name, v in self.__dict__.items():
            if v < 0:
                raise ValueError(f"{name} must be >= 0, got {v}")


@dataclass
class CostLedger:
    """Additive costs by category; ahead-of-time and task-time are derived views."""

    breakdown: Dict[str, float] = field(default_factory=dict)

    def charge(self, category: str, amount: float) -> None:
        if amount < 0:
            raise ValueError("cost amounts must be non-negative")
        if category not in CATEGORIES:
            raise KeyError(category)
        if amount:
            self.breakdown[category] = self.breakdown.get(category, 0.0) + amount

    def merge(self, other: "CostLedger") -> None:
        for k, v in other.breakdown.items():
            self.charge(k, v)

    def copy(self) -> "CostLedger":
        return CostLedger(dict(self.breakdown))

    @property
    def ahead_of_time(self) -> float:
        return sum(self.breakdown.get(k, 0.0) for k in AHEAD_OF_TIME)

    @property
    def task_time(self) -> float:
        return sum(self.breakdown.get(k, 0.0) for k in TASK_TIME)

    @property
    def total(self) -> float:
        return sum(self.breakdown.values())

    def get(self, category: str) -> float:
        return self.breakdown.get(category, 0.0)


class Adaptor:
    """Mediating translation cache.

    A mapping records that ``src_token`` for ``concept`` corresponds to
    ``dst_token``.  With ``per_pair=False`` (the default) mappings are shared
    by every agent pair, so one discovery between two vocabularies serves
    all agents using them; ``per_pair=True`` scopes each mapping to one
    ordered agent pair.
    """

    def __init__(self, per_pair: bool = False):
        self.per_pair = per_pair
        self.mappings: set = set()
        self.discoveries = 0
        self.applications = 0

    def _key(self, src, dst, concept, src_token, dst_token):
        if self.per_pair:
            return (src, dst, concept, src_token, dst_token)
        return (concept, src_token, dst_token)

    def maps(self, src_agent, dst_agent, concept, src_token, dst_token) -> bool:
        return self._key(src_agent, dst_agent, concept, src_token, dst_token) in self.mappings

    def __len__(self) -> int:
        return len(self.mappings)


class GroundingState:
    """Pairwise agreements reached by grounding dialogues.

    ``pairwise_agreements[(lo, hi)][concept]`` is ``(label, token_lo, token_hi)``:
    the agreed label plus each agent's own token when they agreed.  An
    agreement only bridges the pair while both agents still hold those tokens.
    """

    def __init__(self):
        self.pairwise_agreements: Dict[tuple, Dict[int, tuple]] = {}
        self.exchanges_used = 0

    def maps(self, src_agent, dst_agent, concept, src_token, dst_token) -> bool:
        if src_agent <= dst_agent:
            key, want = (src_agent, dst_agent), (src_token, dst_token)
        else:
            key, want = (dst_agent, src_agent), (dst_token, src_token)
        agreement = self.pairwise_agreements.get(key, {}).get(concept)
        return agreement is not None and agreement[1:] == want


def universal_sync(agents: Sequence[Implementation], standard: Standard,
                   costs: CostParams) -> Tuple[List[Implementation], CostLedger]:
    """Overwrite every agent's standard concepts with the standard's tokens.

    Extensions are kept.  Only entries that actually change are charged.
    """
    ledger = CostLedger()
    std = standard.model.entries
    out = []
    written = 0
    for impl in agents:
        mine = impl.model.entries
        changed = sum(1 for c, t in std.items() if mine.get(c) != t)
        if changed == 0 and impl.base_standard == (standard.standard_id, standard.version):
            out.append(impl)
            continue
        written += changed
        entries = dict(mine)
        entries.update(std)
        version = impl.model.version + (1 if changed else 0)
        out.append(Implementation.classify(impl.agent_id, standard, entries, version))
    ledger.charge("sync", costs.c_sync * written)
    return out, ledger


def mediated_translate(adaptor: Adaptor, a: Implementation, b: Implementation, task: Task,
                       costs: CostParams) -> Tuple[InteropOutcome, CostLedger]:
    """Bridge differing tokens through the adaptor, discovering mappings on a cache miss.

    Discovery needs both models to define the concept; missing concepts
    stay missing.
    """
    ledger = CostLedger()
    ea, eb = a.model.entries, b.model.entries
    ia, ib = a.agent_id, b.agent_id
    discovered = applied = 0
    for c in sorted(task.required):
        ta = ea.get(c)
        tb = eb.get(c)
        if ta is None or tb is None or ta == tb:
            continue
        key = adaptor._key(ia, ib, c, ta, tb)
        if key in adaptor.mappings:
            applied += 1
        else:
            adaptor.mappings.add(key)
            discovered += 1
    adaptor.discoveries += discovered
    adaptor.applications += applied
    ledger.charge("map_discover", costs.c_map_discover * discovered)
    ledger.charge("map_apply", costs.c_map_apply * applied)
    return evaluate_interop(a, b, task, adaptor), ledger


def grounding_dialogue(a: Implementation, b: Implementation, task: Task,
                       state: GroundingState, budget: int, costs: CostParams):
    """Agents label shared examples until the task's gap closes or the budget runs out.

    ``a`` speaks first and its token becomes the agreed label.  Existing
    agreements are reused for free.  Returns ``(outcome, state, ledger)``;
    ``state`` is updated in place.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    ledger = CostLedger()
    ea, eb = a.model.entries, b.model.entries
    ia, ib = a.agent_id, b.agent_id
    key = (ia, ib) if ia <= ib else (ib, ia)
    spent = 0
    gap = interoperability_gap(a, b, task).gap_concepts
    for c in sorted(gap):
        ta = ea.get(c)
        tb = eb.get(c)
        if ta is None or tb is None:
            continue
        if state.maps(ia, ib, c, ta, tb):
            continue
        if spent >= budget:
            break
        toks = (ta, tb) if ia <= ib else (tb, ta)
        state.pairwise_agreements.setdefault(key, {})[c] = (ta,) + toks
        spent += 1
    state.exchanges_used += spent
    ledger.charge("ground_exchange", costs.c_ground_exchange * spent)
    return evaluate_interop(a, b, task, state), state, ledger


def sdo_revise(standard: Standard, implementations: Sequence[Implementation],
               threshold_fraction: float, costs: CostParams) -> Tuple[Standard, CostLedger]:
    """Incorporate every non-standard (concept, token) element carried by at least
    ``threshold_fraction`` of implementations."""
    if not 0.0 < threshold_fraction <= 1.0:
        raise ValueError("threshold_fraction must be in (0, 1]")
    if not implementations:
        raise ValueError("implementation list is empty")
    std = standard.model.entries
    tally = Counter()
    for impl in implementations:
        for c, t in impl.model.entries.items():
            if std.get(c) != t:
                tally[(c, t)] += 1
    n = len(implementations)
    updates = {}
    # most common first, smaller token on ties, so a concept gets one token
    for (c, t), k in sorted(tally.items(), key=lambda kv: (-kv[1], kv[0])):
        if k / n >= threshold_fraction - 1e-12 and c not in updates:
            updates[c] = t
    ledger = CostLedger()
    if not updates:
        return standard, ledger
    ledger.charge("revision", costs.c_revision)
    return standard.revise(updates), ledger


def select_strategy(stability: float, homogeneity: float,
                    thresholds: Tuple[float, float] = (1 / 3, 2 / 3)) -> str:
    """Map a (stability, homogeneity) cell onto the regime diagonal.

    Both high gives universal, either low gives localized, anything else
    mediated.  Values on a cut point go to the more standardized side.
    """
    lo, hi = thresholds
    if not 0.0 <= lo <= hi <= 1.0:
        raise ValueError("thresholds must satisfy 0 <= low <= high <= 1")
    for name, v in (("stability", stability), ("homogeneity", homogeneity)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {v}")

    def level(v):
        return 2 if v >= hi else (1 if v >= lo else 0)

    s, h = level(stability), level(homogeneity)
    if s == 2 and h == 2:
        return UNIVERSAL
    if s == 0 or h == 0:
        return LOCALIZED
    return MEDIATED

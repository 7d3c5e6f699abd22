"""Discrete-time simulation of agents interoperating under a conformance strategy.

Each tick runs four phases in order: tasks, repair (inside the strategy
call), drift, then periodic revision and sync.  Randomness comes from
independent streams keyed off the master seed, one per subsystem, so the
task and drift sequences do not depend on how often other subsystems draw.
That also couples runs that differ only in ``shared_fraction``: they see
the same tasks, pairs and drift events.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .config import ScenarioConfig, check
from .conformance import (
    MEDIATED,
    UNIVERSAL,
    STRATEGIES,
    Adaptor,
    CostLedger,
    GroundingState,
    grounding_dialogue,
    mediated_translate,
    sdo_revise,
    select_strategy,
    universal_sync,
)
from .model import (
    FRESH_TOKEN_BASE,
    FRESH_TOKEN_LIMIT,
    CommonModel,
    Implementation,
    Standard,
    Task,
    TaskPopulation,
    evaluate_interop,
)
from .variation import (
    ResidualBucket,
    apply_defects,
    divergence,
    record_residual,
    spawn_from_residual,
    step_impl_drift,
    step_task_drift,
)

# random stream keys
_STANDARDS, _AGENTS, _TEMPLATES, _TASKS, _PAIRS, _DRIFT, _REVISION = range(7)


def _stream(seed: int, key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(key,)))


class Event(NamedTuple):
    tick: int
    kind: str
    category: str  # ledger category, "" for cost-free events
    amount: float
    detail: str


class TickRecord(NamedTuple):
    tick: int
    tasks_attempted: int
    tasks_succeeded: int
    ledger: CostLedger


@dataclass
class RunResult:
    config: ScenarioConfig
    per_tick: List[TickRecord]
    totals: CostLedger
    tasks_attempted: int
    tasks_succeeded: int
    event_log: List[Event]
    final_divergence: Tuple[Optional[float], ...]
    standard_version: int

    @property
    def success_rate(self) -> float:
        if not self.tasks_attempted:
            return 0.0
        return self.tasks_succeeded / self.tasks_attempted

    @property
    def total_cost(self) -> float:
        return self.totals.total


@dataclass
class _World:
    standards: List[Standard]  # index 0 is the reference standard
    agents: List[Implementation]
    groups: List[int]
    populations: Dict[object, TaskPopulation]  # "global" or an (i, j) pair
    extension_ids: range


def _setup(cfg: ScenarioConfig) -> _World:
    n, a_count = cfg.concept_count, cfg.agent_count
    k = cfg.standard_size

    rng = _stream(cfg.seed, _STANDARDS)
    standards = []
    for s in range(cfg.n_standards):
        tokens = rng.integers(0, FRESH_TOKEN_BASE, size=n)
        entries = {c: int(tokens[c]) for c in range(k)}
        standards.append(Standard(CommonModel(entries, 0), s, 0))

    # every per-(agent, concept) draw is made for the whole domain so the
    # outcome for concept c never depends on the standard size
    rng = _stream(cfg.seed, _AGENTS)
    u_omit = rng.random((a_count, n))
    u_var = rng.random((a_count, n))
    var_tok = rng.integers(FRESH_TOKEN_BASE, FRESH_TOKEN_LIMIT, size=(a_count, n))
    variety = cfg.local_token_variety
    if variety:
        conventions = rng.integers(0, FRESH_TOKEN_BASE, size=(n, variety))
        local_tok = conventions[np.arange(n), rng.integers(0, variety, size=(a_count, n))]
    else:
        local_tok = rng.integers(FRESH_TOKEN_BASE, FRESH_TOKEN_LIMIT, size=(a_count, n))
    ext_pool = n
    extension_ids = range(n, n + ext_pool)
    ext_count = rng.binomial(n, cfg.impl_variation.p_extend, size=a_count)
    ext_order = [rng.permutation(ext_pool) for _ in range(a_count)]
    ext_tok = rng.integers(FRESH_TOKEN_BASE, FRESH_TOKEN_LIMIT, size=(a_count, ext_pool))

    u_omit, u_var = u_omit.tolist(), u_var.tolist()
    var_tok, local_tok = var_tok.tolist(), local_tok.tolist()
    var = cfg.impl_variation
    agents, groups = [], []
    for i in range(a_count):
        g = i % cfg.n_standards
        std = standards[g].model.entries
        entries = {}
        for c in range(n):
            if c < k:
                if u_omit[i][c] < var.p_omit:
                    continue
                entries[c] = var_tok[i][c] if u_var[i][c] < var.p_variant else std[c]
            else:
                entries[c] = local_tok[i][c]
        for j in range(min(int(ext_count[i]), ext_pool)):
            idx = int(ext_order[i][j])
            entries[n + idx] = int(ext_tok[i, idx])
        agents.append(Implementation.classify(i, standards[g], entries))
        groups.append(g)

    rng = _stream(cfg.seed, _TEMPLATES)
    weights = (np.arange(n) + 1.0) ** -cfg.popularity_exponent
    weights /= weights.sum()
    universe = tuple(range(n))
    popularity = tuple(weights.tolist()) if cfg.popularity_exponent else None

    def make_population(offset):
        tasks = []
        for t in range(cfg.template_count):
            size = int(rng.integers(cfg.task_size_min, cfg.task_size_max + 1))
            req = rng.choice(n, size=size, replace=False, p=weights)
            tasks.append(Task(frozenset(int(c) for c in req), 1.0, offset + t))
        return TaskPopulation(tuple(tasks), universe, popularity)

    if cfg.template_scope == "pair":
        populations = {}
        for idx, pair in enumerate(_pairs(a_count)):
            populations[pair] = make_population(idx * cfg.template_count)
    else:
        populations = {"global": make_population(0)}
    return _World(standards, agents, groups, populations, extension_ids)


def _pairs(a_count):
    return [(i, j) for i in range(a_count) for j in range(i + 1, a_count)]


def _drift_phase(cfg, world, rng, tick, log):
    drift = cfg.drift
    for key in world.populations:
        pop = world.populations[key]
        new = step_task_drift(pop, drift, rng)
        if new is not pop:
            changed = [t.template_id for t, u in zip(pop.tasks, new.tasks) if t is not u]
            world.populations[key] = new
            for tid in changed:
                log.append(Event(tick, "drift_task", "", 0.0, f"template={tid}"))
    agents = world.agents
    for i, impl in enumerate(agents):
        new = step_impl_drift(impl, drift, rng, world.extension_ids)
        if new is not impl:
            agents[i] = new
            log.append(Event(tick, "drift_impl", "", 0.0, f"agent={i}"))


def _sync(cfg, world, tick, ledger, log):
    costs = cfg.costs
    if cfg.strategy.name == UNIVERSAL:
        batches = [(world.standards[0], list(range(len(world.agents))))]
    else:
        batches = [(std, [i for i, g in enumerate(world.groups) if g == s])
                   for s, std in enumerate(world.standards)]
    for std, members in batches:
        if not std.model.entries:
            continue
        synced, cost = universal_sync([world.agents[i] for i in members], std, costs)
        for i, impl in zip(members, synced):
            world.agents[i] = impl
        if cost.total:
            ledger.merge(cost)
            log.append(Event(tick, "sync", "sync", cost.total, f"standard={std.standard_id}"))


def _revise(cfg, world, bucket, rng, tick, ledger, log):
    costs = cfg.costs
    std = world.standards[0]
    revised, cost = sdo_revise(std, world.agents, cfg.strategy.threshold_fraction, costs)
    revised = apply_defects(std, revised, cfg.drift.p_defect, rng)
    changed = revised is not std
    if changed:
        ledger.merge(cost)
        log.append(Event(tick, "revision", "revision", cost.total, f"version={revised.version}"))
    spawned, bucket = spawn_from_residual(bucket, revised, cfg.drift.residual_threshold, rng)
    if spawned is not revised:
        added = sorted(set(spawned.model.entries) - set(revised.model.entries))
        spawned = apply_defects(revised, spawned, cfg.drift.p_defect, rng)
        amount = 0.0 if changed else costs.c_revision
        if amount:
            ledger.charge("revision", amount)
        log.append(Event(tick, "spawn", "revision" if amount else "", amount,
                         "concepts=" + " ".join(map(str, added))))
        revised = spawned
    world.standards[0] = revised
    return bucket


def run_scenario(config: ScenarioConfig) -> RunResult:
    cfg = check(config)
    world = _setup(cfg)
    costs = cfg.costs
    strategy = cfg.strategy
    rng_tasks = _stream(cfg.seed, _TASKS)
    rng_pairs = _stream(cfg.seed, _PAIRS)
    rng_drift = _stream(cfg.seed, _DRIFT)
    rng_rev = _stream(cfg.seed, _REVISION)
    adaptor = Adaptor(per_pair=strategy.adaptor_per_pair)
    grounding = GroundingState()
    bucket = ResidualBucket()
    log: List[Event] = []
    per_tick: List[TickRecord] = []
    totals = CostLedger()
    attempted = succeeded = 0
    a_count = cfg.agent_count
    pair_scope = cfg.template_scope == "pair"
    track_residuals = strategy.revise_period > 0

    syncing = strategy.sync_period > 0 and (strategy.name == UNIVERSAL or strategy.hybrid_sync)
    pending = CostLedger()
    if cfg.charge_adoption:
        adopted = sum(len(impl.conformed) for impl in world.agents)
        if adopted and costs.c_sync:
            pending.charge("sync", costs.c_sync * adopted)
            log.append(Event(0, "adoption", "sync", costs.c_sync * adopted, f"entries={adopted}"))
    if syncing:
        _sync(cfg, world, 0, pending, log)

    for tick in range(cfg.ticks):
        ledger = pending
        pending = CostLedger()
        n_ok = n_try = 0
        if a_count >= 2:
            firsts = rng_pairs.integers(0, a_count, size=cfg.tasks_per_tick)
            seconds = rng_pairs.integers(0, a_count - 1, size=cfg.tasks_per_tick)
            picks = rng_tasks.random(cfg.tasks_per_tick)
            for ia, ib, pick in zip(firsts.tolist(), seconds.tolist(), picks.tolist()):
                if ib >= ia:
                    ib += 1
                pop = world.populations[(min(ia, ib), max(ia, ib)) if pair_scope else "global"]
                task = pop.tasks[int(pick * len(pop.tasks))]
                a, b = world.agents[ia], world.agents[ib]
                if strategy.name == UNIVERSAL:
                    outcome = evaluate_interop(a, b, task)
                elif strategy.name == MEDIATED:
                    outcome, cost = mediated_translate(adaptor, a, b, task, costs)
                    for cat in ("map_discover", "map_apply"):
                        amt = cost.get(cat)
                        if amt:
                            ledger.charge(cat, amt)
                            log.append(Event(tick, "mapping", cat, amt, f"pair={ia}-{ib}"))
                else:
                    outcome, _, cost = grounding_dialogue(
                        a, b, task, grounding, strategy.grounding_budget, costs)
                    amt = cost.get("ground_exchange")
                    if amt:
                        ledger.charge("ground_exchange", amt)
                        log.append(Event(tick, "grounding", "ground_exchange", amt,
                                         f"pair={ia}-{ib}"))
                n_try += 1
                if outcome.success:
                    n_ok += 1
                else:
                    if costs.c_failure:
                        ledger.charge("failure", costs.c_failure)
                    log.append(Event(tick, "task_failure", "failure", costs.c_failure,
                                     f"pair={ia}-{ib} template={task.template_id}"))
                    if track_residuals:
                        std = world.standards[0].model.entries
                        for c in sorted(task.required):
                            if c not in std:
                                bucket = record_residual(bucket, c)

        _drift_phase(cfg, world, rng_drift, tick, log)

        if strategy.revise_period and (tick + 1) % strategy.revise_period == 0:
            bucket = _revise(cfg, world, bucket, rng_rev, tick, ledger, log)
        if syncing and (tick + 1) % strategy.sync_period == 0:
            _sync(cfg, world, tick, ledger, log)

        totals.merge(ledger)
        attempted += n_try
        succeeded += n_ok
        per_tick.append(TickRecord(tick, n_try, n_ok, ledger))

    ref = world.standards[0]
    final = tuple(divergence(ref, impl) if ref.model.entries else None
                  for impl in world.agents)
    return RunResult(cfg, per_tick, totals, attempted, succeeded, log, final, ref.version)


def time_to_divergence(config: ScenarioConfig, max_ticks: int) -> Optional[int]:
    """Ticks elapsed until some agent's model first differs from the reference standard.

    Returns 0 when an agent already differs at set-up and ``None`` when none
    does within ``max_ticks``.  Only the drift phase runs; no repair is
    applied, so this measures how long a standard survives unchanged.
    """
    if max_ticks < 1:
        raise ValueError("max_ticks must be >= 1")
    cfg = check(config)
    world = _setup(cfg)
    ref = world.standards[0].model.entries
    if any(impl.model.entries != ref for impl in world.agents):
        return 0
    rng = _stream(cfg.seed, _DRIFT)
    log: List[Event] = []
    for tick in range(max_ticks):
        log.clear()
        _drift_phase(cfg, world, rng, tick, log)
        if any(e.kind == "drift_impl" for e in log):
            if any(impl.model.entries != ref for impl in world.agents):
                return tick + 1
    return None


class SweepPoint(NamedTuple):
    shared_fraction: float
    mean_total_cost: float
    mean_success_rate: float


def _worker_count(workers):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("CONFLAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _run_summary(cfg):
    res = run_scenario(cfg)
    return res.total_cost, res.success_rate


def run_many(configs: Sequence[ScenarioConfig], workers: Optional[int] = None):
    """Run configs, possibly in parallel; results come back in input order."""
    n = _worker_count(workers)
    if n <= 1 or len(configs) < 2:
        return [_run_summary(c) for c in configs]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(_run_summary, configs, chunksize=max(1, len(configs) // (4 * n))))


def sweep_shared_fraction(config: ScenarioConfig, grid: Sequence[float], seeds_per_point: int,
                          workers: Optional[int] = None) -> List[SweepPoint]:
    """Mean total cost and success rate per shared fraction.

    Every grid point uses the same seeds ``config.seed + i``, so points
    differ only in how much of the domain is standardized.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("grid is empty")
    if seeds_per_point < 1:
        raise ValueError("seeds_per_point must be >= 1")
    jobs = [replace(config, shared_fraction=float(f), seed=config.seed + s)
            for f in grid for s in range(seeds_per_point)]
    for job in jobs:
        check(job)
    results = run_many(jobs, workers)
    points = []
    for gi, f in enumerate(grid):
        chunk = results[gi * seeds_per_point:(gi + 1) * seeds_per_point]
        points.append(SweepPoint(float(f),
                                 float(np.mean([c for c, _ in chunk])),
                                 float(np.mean([r for _, r in chunk]))))
    return points


def sweep_argmin(points: Sequence[SweepPoint]) -> SweepPoint:
    """Cheapest point; the lowest shared fraction wins ties."""
    return min(points, key=lambda p: (p.mean_total_cost, p.shared_fraction))


@dataclass(frozen=True)
class RegimePreset:
    name: str
    stability: float
    homogeneity: float
    config: ScenarioConfig

    @property
    def predicted(self) -> str:
        return select_strategy(self.stability, self.homogeneity)


@dataclass(frozen=True)
class RegimeOutcome:
    name: str
    predicted: str
    mean_cost: Dict[str, float]
    ranking: Tuple[str, ...]

    @property
    def winner(self) -> str:
        return self.ranking[0]

    @property
    def predicted_wins(self) -> bool:
        return self.winner == self.predicted

    @property
    def margin(self) -> float:
        """Relative gap between the runner-up and the winner."""
        best = self.mean_cost[self.ranking[0]]
        second = self.mean_cost[self.ranking[1]]
        return (second - best) / best if best else float("inf")


def regime_experiment(presets: Sequence[RegimePreset], seeds: int,
                      workers: Optional[int] = None) -> List[RegimeOutcome]:
    """Run every strategy on every preset and rank strategies by mean total cost."""
    out = []
    for preset in presets:
        jobs = [replace(preset.config.with_strategy(s), seed=preset.config.seed + i)
                for s in STRATEGIES for i in range(seeds)]
        results = run_many(jobs, workers)
        means = {}
        for si, s in enumerate(STRATEGIES):
            chunk = results[si * seeds:(si + 1) * seeds]
            means[s] = float(np.mean([c for c, _ in chunk]))
        ranking = tuple(sorted(STRATEGIES, key=lambda s: (means[s], STRATEGIES.index(s))))
        out.append(RegimeOutcome(preset.name, preset.predicted, means, ranking))
    return out

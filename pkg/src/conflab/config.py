"""Scenario configuration: dataclasses, strict JSON loading and validation."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping

from .conformance import STRATEGIES, CostParams
from .model import VariationParams
from .variation import DriftParams

TEMPLATE_SCOPES = ("global", "pair")


class ConfigError(ValueError):
    """Invalid scenario configuration; ``errors`` lists one message per offending field."""

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class StrategyParams:
    """Conformance strategy and its knobs.

    ``sync_period`` re-syncs agents every that many ticks (0 disables;
    universal requires >= 1).  Under mediated or localized conformance the
    sync only runs with ``hybrid_sync``, and then aligns each agent with
    its own base standard rather than the reference one.  ``revise_period`` runs the SDO
    revision and residual spawning on the reference standard (0 disables).
    ``grounding_budget`` caps exchanges per grounding dialogue.
    """

    name: str = "universal"
    sync_period: int = 1
    grounding_budget: int = 8
    threshold_fraction: float = 0.8
    revise_period: int = 0
    adaptor_per_pair: bool = False
    hybrid_sync: bool = False


@dataclass(frozen=True)
class ScenarioConfig:
    concept_count: int = 40
    agent_count: int = 8
    template_count: int = 20
    ticks: int = 50
    tasks_per_tick: int = 8
    strategy: StrategyParams = field(default_factory=StrategyParams)
    drift: DriftParams = field(default_factory=DriftParams)
    costs: CostParams = field(default_factory=CostParams)
    impl_variation: VariationParams = field(default_factory=VariationParams)
    shared_fraction: float = 1.0
    seed: int = 0
    # world shape
    n_standards: int = 1
    task_size_min: int = 2
    task_size_max: int = 4
    popularity_exponent: float = 0.0
    local_token_variety: int = 0
    template_scope: str = "global"
    # charge c_sync for every standard entry an agent implements at set-up
    charge_adoption: bool = True

    @property
    def standard_size(self) -> int:
        # guard against ceil(0.3 * 10) == 4 from float rounding
        return math.ceil(self.shared_fraction * self.concept_count - 1e-9)

    def with_strategy(self, name: str) -> "ScenarioConfig":
        return replace(self, strategy=replace(self.strategy, name=name))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


_NESTED = {
    "strategy": StrategyParams,
    "drift": DriftParams,
    "costs": CostParams,
    "impl_variation": VariationParams,
}


def _check_type(path, value, expected, errors):
    if expected is bool:
        ok = isinstance(value, bool)
    elif expected is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif expected is float:
        ok = isinstance(value, (int, float)) and not isinstance(value, bool) \
            and math.isfinite(value)
    else:
        ok = isinstance(value, expected)
    if not ok:
        errors.append(f"{path}: expected {expected.__name__}, got {value!r}")
    return ok


def _field_types(cls):
    hints = {"int": int, "float": float, "str": str, "bool": bool}
    return {f.name: hints.get(f.type if isinstance(f.type, str) else f.type.__name__)
            for f in fields(cls)}


def _build(cls, data, prefix, errors):
    if not isinstance(data, Mapping):
        errors.append(f"{prefix or 'config'}: expected an object")
        return None
    types = _field_types(cls)
    kwargs = {}
    for key, value in data.items():
        path = f"{prefix}.{key}" if prefix else key
        if key not in types:
            errors.append(f"{path}: unknown key")
            continue
        if key in _NESTED and cls is ScenarioConfig:
            sub = _build(_NESTED[key], value, path, errors)
            if sub is not None:
                kwargs[key] = sub
            continue
        if _check_type(path, value, types[key], errors):
            kwargs[key] = float(value) if types[key] is float else value
    try:
        return cls(**kwargs)
    except (ValueError, TypeError) as exc:
        errors.append(f"{prefix or 'config'}: {exc}")
        return None


def validate(cfg: ScenarioConfig) -> List[str]:
    errors = []
    for name in ("concept_count", "agent_count", "template_count", "ticks", "tasks_per_tick",
                 "n_standards", "task_size_min", "task_size_max"):
        if getattr(cfg, name) < 1:
            errors.append(f"{name}: must be >= 1")
    if not 0.0 <= cfg.shared_fraction <= 1.0:
        errors.append(f"shared_fraction: must be in [0, 1], got {cfg.shared_fraction}")
    if cfg.task_size_max < cfg.task_size_min:
        errors.append("task_size_max: must be >= task_size_min")
    if cfg.task_size_max > cfg.concept_count:
        errors.append("task_size_max: must be <= concept_count")
    if cfg.popularity_exponent < 0:
        errors.append("popularity_exponent: must be >= 0")
    if cfg.local_token_variety < 0:
        errors.append("local_token_variety: must be >= 0 (0 means every agent coins its own)")
    if cfg.template_scope not in TEMPLATE_SCOPES:
        errors.append(f"template_scope: must be one of {TEMPLATE_SCOPES}")
    if cfg.n_standards > cfg.agent_count:
        errors.append("n_standards: must be <= agent_count")
    s = cfg.strategy
    if s.name not in STRATEGIES:
        errors.append(f"strategy.name: must be one of {STRATEGIES}, got {s.name!r}")
    for name in ("sync_period", "grounding_budget", "revise_period"):
        if getattr(s, name) < 0:
            errors.append(f"strategy.{name}: must be >= 0")
    if s.name == "universal" and s.sync_period < 1:
        errors.append("strategy.sync_period: universal strategy needs sync_period >= 1")
    if not 0.0 < s.threshold_fraction <= 1.0:
        errors.append("strategy.threshold_fraction: must be in (0, 1]")
    return errors


def config_from_dict(data: Mapping[str, Any]) -> ScenarioConfig:
    errors: List[str] = []
    cfg = _build(ScenarioConfig, data, "", errors)
    if cfg is not None:
        errors.extend(validate(cfg))
    if errors:
        raise ConfigError(errors)
    return cfg


def load_config(path) -> ScenarioConfig:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{path}: not valid JSON ({exc})"]) from None
    return config_from_dict(data)


def check(cfg: ScenarioConfig) -> ScenarioConfig:
    errors = validate(cfg)
    if errors:
        raise ConfigError(errors)
    return cfg

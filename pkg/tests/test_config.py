import json

import pytest

from conflab.config import ConfigError, ScenarioConfig, config_from_dict, load_config
from conflab.presets import REGIME_PRESETS, load_preset, load_regime_presets


def test_defaults_round_trip():
    cfg = ScenarioConfig()
    assert config_from_dict(cfg.to_dict()) == cfg


def test_nested_values():
    cfg = config_from_dict({"strategy": {"name": "localized", "sync_period": 0},
                            "drift": {"p_impl_drift": 0.25}, "costs": {"c_sync": 3}})
    assert cfg.strategy.name == "localized"
    assert cfg.drift.p_impl_drift == 0.25
    assert cfg.costs.c_sync == 3.0 and isinstance(cfg.costs.c_sync, float)


@pytest.mark.parametrize("data,field", [
    ({"shared_fraction": 1.5}, "shared_fraction"),
    ({"agent_count": 0}, "agent_count"),
    ({"agent_count": 2.5}, "agent_count"),
    ({"bogus": 1}, "bogus"),
    ({"strategy": {"name": "anarchy"}}, "strategy.name"),
    ({"strategy": {"color": "red"}}, "strategy.color"),
    ({"drift": {"p_task_drift": 2.0}}, "drift"),
    ({"costs": {"c_failure": -1}}, "costs"),
    ({"impl_variation": "none"}, "impl_variation"),
    ({"charge_adoption": 1}, "charge_adoption"),
    ({"strategy": {"name": "universal", "sync_period": 0}}, "strategy.sync_period"),
])
def test_field_level_errors(data, field):
    with pytest.raises(ConfigError) as err:
        config_from_dict(data)
    assert any(field in msg for msg in err.value.errors)


def test_several_errors_reported_together():
    with pytest.raises(ConfigError) as err:
        config_from_dict({"shared_fraction": -1, "ticks": 0, "nope": True})
    assert len(err.value.errors) == 3


def test_load_rejects_bad_json(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(p)


def test_load_file(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"ticks": 7}))
    assert load_config(p).ticks == 7


def test_standard_size_rounding():
    assert ScenarioConfig(concept_count=10, shared_fraction=0.3).standard_size == 3
    assert ScenarioConfig(concept_count=10, shared_fraction=0.35).standard_size == 4
    assert ScenarioConfig(concept_count=10, shared_fraction=0.0).standard_size == 0


def test_presets_load_and_validate():
    presets = load_regime_presets()
    assert len(presets) == len(REGIME_PRESETS)
    assert [p.predicted for p in presets] == ["universal", "mediated", "localized"]
    centre = load_preset("mediated_centre")
    assert 0.0 < centre.costs.c_sync and centre.costs.c_ground_exchange == 4
    assert load_preset("conjecture").agent_count == 1

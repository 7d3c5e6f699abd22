"""Frozen scenario presets shipped with the package.

The regime presets share one cost schedule and differ only in how stable
and homogeneous the simulated world is.  ``scripts/calibrate_presets.py``
regenerates the evidence behind each one.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import List

from .config import ScenarioConfig, config_from_dict
from .engine import RegimePreset

REGIME_PRESETS = ("regime_stable", "regime_intermediate", "regime_dynamic")


def _read(name: str) -> dict:
    text = resources.files("conflab").joinpath("presets", f"{name}.json").read_text()
    return json.loads(text)


def load_preset(name: str) -> ScenarioConfig:
    data = _read(name)
    return config_from_dict(data.get("config", data))


def load_regime_presets() -> List[RegimePreset]:
    out = []
    for name in REGIME_PRESETS:
        data = _read(name)
        out.append(RegimePreset(data["name"], data["stability"], data["homogeneity"],
                                config_from_dict(data["config"])))
    return out

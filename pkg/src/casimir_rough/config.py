"""JSON run configuration for the command-line tool.

Keys carry their unit as a suffix (``_nm``, ``_um``, ``_pN``, ``_mV``,
``_nN_nm``, ``_pN_per_nm``); unsuffixed keys are dimensionless. Scenario
keys live at the top level, command options in a section named after the
command. Unknown keys are rejected.

Example::

    {
      "radius_um": 98.0,
      "h1_nm": 40, "h2_nm": 20, "h0_nm": 10, "v1": 0.11, "v2": 0.25, "v0": 0.64,
      "force": {"grid_start_nm": 80, "grid_stop_nm": 910, "grid_num": 200}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .combined_force import ScenarioConfig
from .conductivity import MaterialStack
from .core_types import SphereGeometry
from .roughness import RoughnessLevels, solve_zero_level


class ConfigError(ValueError):
    pass


SCENARIO_DEFAULTS: dict[str, Any] = {
    "radius_um": 98.0,
    "delta0_nm": 16.0,
    "delta0_tilde_nm": 80.0,
    "Delta_nm": 20.0,
    "lambda_p_Al_nm": 100.0,
    "lambda_p_Au_nm": 500.0,
    "h1_nm": 40.0,
    "h2_nm": 20.0,
    "h0_nm": 10.0,
    "v1": 0.11,
    "v2": 0.25,
    "v0": 0.64,
    "regime_boundary_nm": 500.0,
    "distance_offset_nm": 0.0,
}

COMMAND_DEFAULTS: dict[str, dict[str, Any]] = {
    "force": {
        "separations_nm": None,
        "grid_start_nm": 80.0,
        "grid_stop_nm": 910.0,
        "grid_num": 200,
        "convention": "AuPd_surfaces",
        "output": None,
    },
    "synth": {
        "grid_start_nm": 3.6,
        "grid_stop_nm": None,
        "grid_step_nm": 3.6,
        "grid_num": None,
        "theory": "combined",
        "theory_regime": "small",
        "convention": "Al_surfaces",
        "a0_nm": 0.0,
        "B_nN_nm": 0.0,
        "C_pN_per_nm": 0.0,
        "E_pN": 0.0,
        "noise_pN": 0.0,
        "seed": None,
        "output": None,
    },
    "fit": {
        "input": None,
        "theory": "combined",
        "theory_regime": "small",
        "convention": "Al_surfaces",
        "B_nN_nm": -2.8,
        "a0_min_nm": 115.0,
        "a0_max_nm": 125.0,
        "region1_min_nm": 500.0,
        "rms_ranges_nm": [[120.0, 500.0], [120.0, 950.0]],
        "output": None,
        "output_curve": None,
    },
    "analyze_map": {
        "input": None,
        "pitch_nm": None,
        "t_low_nm": None,
        "t_high_nm": None,
        "feature_nm": 300.0,
        "a_nm": 100.0,
        "validity_margin": 0.3,
        "output": None,
    },
    "calibrate": {
        "records": [],
        "pairs": [],
        "V2_mV": 29.0,
        "output": None,
    },
    "psi": {
        "eps1": None,
        "eps2": None,
        "rel_tolerance": 1e-7,
        "x_cutoff": 60.0,
        "p_cutoff": 1000.0,
        "output": None,
    },
}


@dataclass
class RunConfig:
    command: str
    scenario: dict[str, Any] = field(default_factory=lambda: dict(SCENARIO_DEFAULTS))
    options: dict[str, Any] = field(default_factory=dict)

    def scenario_config(self) -> ScenarioConfig:
        s = self.scenario
        try:
            levels = RoughnessLevels(s["h1_nm"], s["h2_nm"], s["h0_nm"], s["v1"], s["v2"], s["v0"])
            stack = MaterialStack(s["delta0_nm"], s["delta0_tilde_nm"], s["Delta_nm"],
                                  s["lambda_p_Al_nm"], s["lambda_p_Au_nm"])
            return ScenarioConfig(SphereGeometry(s["radius_um"]), stack, solve_zero_level(levels),
                                  s["regime_boundary_nm"], s["distance_offset_nm"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid scenario: {exc}") from exc


def _section_name(command: str) -> str:
    return command.replace("-", "_")


def build_config(command: str, document: dict | None = None, overrides: dict | None = None) -> RunConfig:
    """Merge defaults, a parsed JSON document and flag overrides (flags win)."""
    section = _section_name(command)
    if section not in COMMAND_DEFAULTS:
        raise ConfigError(f"unknown command {command!r}")
    document = dict(document or {})
    scenario = dict(SCENARIO_DEFAULTS)
    options = dict(COMMAND_DEFAULTS[section])
    sections = {_section_name(c) for c in COMMAND_DEFAULTS}
    for key, value in document.items():
        if key in SCENARIO_DEFAULTS:
            scenario[key] = value
        elif key in sections:
            if not isinstance(value, dict):
                raise ConfigError(f"section {key!r} must be an object")
            if key == section:
                for k, v in value.items():
                    if k not in options:
                        raise ConfigError(f"unknown key {key}.{k}")
                    options[k] = v
            else:
                unknown = set(value) - set(COMMAND_DEFAULTS[key])
                if unknown:
                    raise ConfigError(f"unknown key(s) in {key}: {sorted(unknown)}")
        else:
            raise ConfigError(f"unknown key {key!r}")
    for key, value in (overrides or {}).items():
        if key in SCENARIO_DEFAULTS:
            scenario[key] = value
        elif key in options:
            options[key] = value
        else:
            raise ConfigError(f"unknown override key {key!r}")
    return RunConfig(command, scenario, options)


def load_config(command: str, path=None, overrides: dict | None = None) -> RunConfig:
    document = None
    if path is not None:
        try:
            document = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(document, dict):
            raise ConfigError("config root must be a JSON object")
    return build_config(command, document, overrides)

"""Scenario files: JSON mirroring :class:`ScenarioConfig`.

A file may give any subset of the keys below; missing keys take the default
values. Unknown keys are rejected.

.. code-block:: json

    {
      "seed": 42,
      "n_projects": 100,
      "arrival_mean": 35.0,
      "size_dist": {"small": 0.48, "medium": 0.25, "large": 0.27},
      "capacities": {"analysts": 5, "designers": 5, "programmers": 10,
                     "testers": 20, "maintenance": 5},
      "demand": {"analysts": {"small": 1, "medium": 2, "large": 5}, "...": {}},
      "phases": {
        "analysis": {"role": "analysts", "duration_lo": 3, "duration_hi": 5,
                     "fail_prob": {"small": 0.0, "medium": 0.0, "large": 0.0}},
        "...": {}
      }
    }

``capacities`` and ``demand`` must name the same pools; giving a new pool in
``capacities`` needs a matching ``demand`` row. Overrides use dotted paths
into this structure, e.g. ``capacities.programmers=12`` or
``phases.design.fail_prob.large=0.5``.
"""

from __future__ import annotations

import copy
import json
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Union

from .model import ConfigError, Phase, PhaseSpec, ScenarioConfig
from .rng import SIZES, SizeDistribution

BUNDLED = ("scenario1", "scenario2")

_TOP_KEYS = ("seed", "n_projects", "arrival_mean", "size_dist", "capacities", "demand", "phases")
_PHASE_KEYS = ("role", "duration_lo", "duration_hi", "fail_prob")

# Short aliases accepted by --set.
_ALIASES = {"projects": "n_projects"}


def config_to_dict(config: ScenarioConfig) -> dict[str, Any]:
    return {
        "seed": config.seed,
        "n_projects": config.n_projects,
        "arrival_mean": config.arrival_mean,
        "size_dist": dict(zip(SIZES, config.size_dist.as_tuple())),
        "capacities": dict(config.capacities),
        "demand": {role: dict(row) for role, row in config.demand.items()},
        "phases": {
            spec.phase.label: {
                "role": spec.role,
                "duration_lo": spec.duration_lo,
                "duration_hi": spec.duration_hi,
                "fail_prob": {s: spec.fail_prob.get(s, 0.0) for s in SIZES},
            }
            for spec in config.phase_specs
        },
    }


def _merge(base: dict, update: dict, path: str, problems: list[tuple[str, str]], open_keys: bool) -> None:
    for key, value in update.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            if not open_keys:
                problems.append((where, "unknown key"))
                continue
            base[key] = value
        elif isinstance(base[key], dict):
            if not isinstance(value, dict):
                problems.append((where, f"expected an object, got {value!r}"))
                continue
            # capacities/demand may introduce new pools; everything else is closed.
            _merge(base[key], value, where, problems, open_keys=where in ("capacities", "demand"))
        else:
            base[key] = value


def config_from_dict(data: dict[str, Any]) -> ScenarioConfig:
    """Build and validate a config from a (possibly partial) dict."""
    if not isinstance(data, dict):
        raise ConfigError([("", "scenario must be a JSON object")])
    problems: list[tuple[str, str]] = []
    merged = config_to_dict(ScenarioConfig())
    _merge(merged, data, "", problems, open_keys=False)
    if problems:
        raise ConfigError(problems)
    specs = []
    for phase in Phase:
        entry = merged["phases"][phase.label]
        specs.append(
            PhaseSpec(phase, entry["role"], entry["duration_lo"], entry["duration_hi"], dict(entry["fail_prob"]))
        )
    sd = merged["size_dist"]
    demand = merged["demand"]
    for role, row in demand.items():
        if not isinstance(row, dict):
            raise ConfigError([(f"demand.{role}", f"expected an object, got {row!r}")])
    config = ScenarioConfig(
        capacities=dict(merged["capacities"]),
        demand={role: dict(row) for role, row in demand.items()},
        phase_specs=tuple(specs),
        arrival_mean=merged["arrival_mean"],
        size_dist=SizeDistribution(sd["small"], sd["medium"], sd["large"]),
        n_projects=merged["n_projects"],
        seed=merged["seed"],
    )
    return config.validate()


def _parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(data: dict[str, Any], overrides: Iterable[str]) -> dict[str, Any]:
    """Return a copy of ``data`` with ``key=value`` overrides applied.

    Keys are dotted paths; values are parsed as JSON scalars when possible.
    """
    out = copy.deepcopy(data)
    problems = []
    known = config_to_dict(ScenarioConfig())
    for item in overrides:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or not key:
            problems.append((item, "override must look like key=value"))
            continue
        parts = key.split(".")
        parts[0] = _ALIASES.get(parts[0], parts[0])
        if parts[0] not in _TOP_KEYS:
            problems.append((key, "unknown key"))
            continue
        # Reject paths the defaults do not know, except new pools.
        ref = known
        for depth, part in enumerate(parts):
            if isinstance(ref, dict) and part in ref:
                ref = ref[part]
            elif depth == 1 and parts[0] in ("capacities", "demand"):
                ref = None
            elif depth == 2 and parts[0] == "demand" and part in SIZES:
                ref = None
            else:
                problems.append((key, "unknown key"))
                break
        else:
            node = out
            for part in parts[:-1]:
                node = node.setdefault(part, {})
            node[parts[-1]] = _parse_value(raw.strip())
    if problems:
        raise ConfigError(problems)
    return out


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("waterfallsim") / "scenarios" / f"{name}.json"))


def resolve_path(ref: Union[str, Path]) -> Path:
    """A file path, or the name of a bundled scenario."""
    path = Path(ref)
    if path.exists() or str(ref) not in BUNDLED:
        return path
    return bundled_path(str(ref))


def load_dict(ref: Union[str, Path]) -> dict[str, Any]:
    path = resolve_path(ref)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([(str(path), f"cannot read scenario file ({exc.strerror or exc})")]) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([(str(path), f"invalid JSON: {exc}")]) from exc
    if not isinstance(data, dict):
        raise ConfigError([(str(path), "scenario must be a JSON object")])
    return data


def load_scenario(ref: Union[str, Path], overrides: Iterable[str] = ()) -> ScenarioConfig:
    return config_from_dict(apply_overrides(load_dict(ref), overrides))


def dump_scenario(config: ScenarioConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2) + "\n"


def save_scenario(config: ScenarioConfig, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(dump_scenario(config), encoding="utf-8")
    return path

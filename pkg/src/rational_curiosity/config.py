"""Run-configuration documents (JSON).

A config is a nested JSON object. Missing keys take the defaults below,
unknown keys are rejected, and the fully resolved document is what gets
echoed next to every output.
"""

from __future__ import annotations

import copy
import json
from typing import Any, Dict, Iterable

from .environment import BaseDistribution, EnvironmentSpec
from .exceptions import ConfigurationError
from .experiment import ExperimentConfig, InitialExposures, ParticipantModel
from .model import GrowthModel
from .simulation import SimConfig

# None marks an optional value with no default; its accepted types are in _OPTIONAL
DEFAULTS: Dict[str, Any] = {
    "environment": {
        "n": 20,
        "coupling": "independent",
        "base": {"kind": "uniform", "s": 1.0, "probs": None},
        "growth_rate": 1.0,
        "smoothing": 1e-6,
    },
    "simulation": {
        "policy": "rational",
        "steps": 100,
        "exposure_increment": 1.0,
        "seed": 0,
    },
    "compare": {
        "policies": ["rational", "novelty", "info_gap", "learning_progress", "random"],
        "replications": 100,
    },
    "experiment": {
        "n_participants": 200,
        "n_questions": 40,
        "n_bonus_sampled": 10,
        "seed": 0,
        "participant": {
            "initial_exposures": {"kind": "exponential", "mean": 1.0, "values": None},
            "rating_noise_sd": 0.5,
            "confidence_noise_sd": 0.05,
            "reveal_steepness": 4.0,
            "reveal_threshold": 0.5,
            "wait_penalty": 0.1,
        },
    },
    "analysis": {
        "permutations": 10000,
        "seed": 0,
        "bin_width": 0.1,
        "alpha": 0.05,
    },
    "output": {
        "dir": "out",
        "format": "csv",
    },
}

_OPTIONAL = {
    "environment.base.probs": list,
    "experiment.participant.initial_exposures.values": list,
}


def _type_ok(value, default) -> bool:
    if isinstance(default, bool):
        return isinstance(value, bool)
    if isinstance(default, int):
        return isinstance(value, int) and not isinstance(value, bool)
    if isinstance(default, float):
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if isinstance(default, str):
        return isinstance(value, str)
    if isinstance(default, list):
        return isinstance(value, list)
    return True


def _merge(defaults: dict, given: dict, prefix: str) -> dict:
    if not isinstance(given, dict):
        raise ConfigurationError(f"{prefix or 'config'} must be an object", key=prefix or None)
    out = copy.deepcopy(defaults)
    for key, value in given.items():
        path = f"{prefix}.{key}" if prefix else key
        if key not in defaults:
            raise ConfigurationError(f"unknown key {path!r}", key=path)
        default = defaults[key]
        if isinstance(default, dict):
            # shorthand: "base": "uniform"
            if isinstance(value, str) and "kind" in default:
                value = {"kind": value}
            out[key] = _merge(default, value, path)
        elif default is None:
            expected = _OPTIONAL[path]
            if value is not None and not isinstance(value, expected):
                raise ConfigurationError(f"{path} must be a {expected.__name__} or null", key=path)
            out[key] = value
        else:
            if not _type_ok(value, default):
                raise ConfigurationError(
                    f"{path} must be of type {type(default).__name__}, got {value!r}", key=path)
            out[key] = value
    return out


def resolve(raw: dict | None = None) -> dict:
    return _merge(DEFAULTS, raw or {}, "")


def load(path) -> dict:
    """Read and resolve a config file; ``OSError`` propagates for I/O failures."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
    return resolve(raw)


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(cfg: dict, assignments: Iterable[str]) -> dict:
    """Apply ``section.key=value`` strings; values are parsed as JSON when possible."""
    raw = copy.deepcopy(cfg)
    for item in assignments:
        if "=" not in item:
            raise ConfigurationError(f"override {item!r} is not of the form key=value")
        path, text = item.split("=", 1)
        node = raw
        parts = path.strip().split(".")
        for part in parts[:-1]:
            if not isinstance(node.get(part), dict):
                raise ConfigurationError(f"unknown key {path!r}", key=path)
            node = node[part]
        node[parts[-1]] = _parse_value(text)
    return resolve(raw)


def dumps(cfg: dict) -> str:
    return json.dumps(cfg, indent=2, sort_keys=True) + "\n"


def _prefixed(section: str, exc: ConfigurationError) -> ConfigurationError:
    key = f"{section}.{exc.key}" if exc.key else section
    return ConfigurationError(f"{key}: {exc}", key=key)


def build_environment(cfg: dict) -> EnvironmentSpec:
    e = cfg["environment"]
    b = e["base"]
    try:
        base = BaseDistribution(kind=b["kind"], exponent=b["s"], probs=b["probs"])
    except ValueError as exc:
        if isinstance(exc, ConfigurationError):
            raise _prefixed("environment", exc) from exc
        raise ConfigurationError(f"environment.base.kind: unknown base {b['kind']!r}",
                                 key="environment.base.kind") from exc
    try:
        growth = GrowthModel(e["growth_rate"])
    except ValueError as exc:
        raise ConfigurationError(f"environment.growth_rate: {exc}", key="environment.growth_rate") from exc
    try:
        return EnvironmentSpec(n=e["n"], coupling=e["coupling"], base=base, growth=growth,
                               smoothing=e["smoothing"])
    except ConfigurationError as exc:
        raise _prefixed("environment", exc) from exc


def build_sim_config(cfg: dict, policy=None, seed=None) -> SimConfig:
    env = build_environment(cfg)
    s = cfg["simulation"]
    try:
        return SimConfig(env=env, policy=policy or s["policy"], steps=s["steps"],
                         exposure_increment=s["exposure_increment"],
                         seed=s["seed"] if seed is None else seed)
    except ConfigurationError as exc:
        section = "compare" if exc.key == "policy" and policy is not None else "simulation"
        if section == "compare":
            exc = ConfigurationError(str(exc), key="policies")
        raise _prefixed(section, exc) from exc


def build_experiment_config(cfg: dict) -> ExperimentConfig:
    x = cfg["experiment"]
    pm = x["participant"]
    ie = pm["initial_exposures"]
    try:
        exposures = InitialExposures(kind=ie["kind"], mean=ie["mean"], values=ie["values"])
        participant = ParticipantModel(
            initial_exposures=exposures,
            rating_noise_sd=pm["rating_noise_sd"],
            confidence_noise_sd=pm["confidence_noise_sd"],
            reveal_steepness=pm["reveal_steepness"],
            reveal_threshold=pm["reveal_threshold"],
            wait_penalty=pm["wait_penalty"],
        )
    except ConfigurationError as exc:
        raise _prefixed("experiment.participant", exc) from exc
    try:
        return ExperimentConfig(n_participants=x["n_participants"], n_questions=x["n_questions"],
                                n_bonus_sampled=x["n_bonus_sampled"], participant=participant,
                                seed=x["seed"])
    except ConfigurationError as exc:
        raise _prefixed("experiment", exc) from exc

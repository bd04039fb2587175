"""Campaign configuration: TOML file, ``--set`` overrides, env seed, validation."""
from __future__ import annotations

import copy
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from ..errors import ConfigError
from ..qwdevice import DEFAULT_BOUNDS, SWEEP_FREQUENCIES_GHZ

SEED_ENV = "NANOOPT_SEED"

TASKS = ("optimize", "evolve", "anneal", "sweep", "oracle", "ljmin", "gradcheck")
OBJECTIVES = ("quadratic", "rosenbrock", "doublewell", "lj", "qwdevice")
METHODS = ("sdm", "damped", "cg", "bfgs", "ga", "sa")

_LOCAL = {"sdm", "damped", "cg", "bfgs"}
_CONTINUOUS = {"quadratic", "rosenbrock", "doublewell", "lj"}

# task -> (allowed objectives, allowed methods, default objective, default method)
COMBINATIONS: dict[str, tuple[set, set, str, str | None]] = {
    "optimize": (_CONTINUOUS, _LOCAL, "quadratic", "cg"),
    "ljmin": ({"lj"}, _LOCAL, "lj", "cg"),
    "anneal": (_CONTINUOUS, {"sa"}, "doublewell", "sa"),
    "evolve": ({"qwdevice", "quadratic", "rosenbrock", "doublewell"}, {"ga"}, "qwdevice", "ga"),
    "oracle": ({"qwdevice", "quadratic", "rosenbrock", "doublewell"}, {"ga"}, "qwdevice", "ga"),
    "sweep": ({"qwdevice"}, {"ga"}, "qwdevice", "ga"),
    "gradcheck": (_CONTINUOUS, set(), "lj", None),
}

DEFAULTS: dict[str, Any] = {
    "campaign": {"task": "optimize", "objective": "", "method": "", "seed": 0,
                 "out": "results/run.csv", "quiet": False},
    "local": {"lam": 0.01, "mu": 0.5, "max_iter": 10000, "grad_tol": 1e-8,
              "use_backtracking": True, "x0": []},
    "ga": {"population_size": 20, "generations": 100, "crossover_prob": 0.9,
           "mutation_rate": 0.001, "elitism": 1, "bits_per_param": 4},
    "sa": {"t_initial": 0.0, "t_final": 0.0, "cooling_factor": 0.95,
           "steps_per_temperature": 100, "proposal_scale": 0.0, "x0": []},
    "device": {"frequency_hz": 300e9, "f0_v_per_m": 0.75e5,
               "frequencies_hz": [f * 1e9 for f in SWEEP_FREQUENCIES_GHZ],
               "lo": list(DEFAULT_BOUNDS.lo), "hi": list(DEFAULT_BOUNDS.hi), "fixed": {}},
    "quadratic": {"A": [[4.0, 1.0], [1.0, 3.0]], "b": [1.0, 2.0]},
    "lj": {"n_atoms": 13, "start": "random", "min_distance": 0.7, "perturbation": 0.05},
    "gradcheck": {"samples": 100, "threshold": 1e-4},
}


def _merge(base: dict, extra: dict, where: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in extra.items():
        path = f"{where}{key}"
        if key not in out:
            raise ConfigError(f"unknown config key '{path}'")
        if isinstance(out[key], dict) and key != "fixed":
            if not isinstance(value, dict):
                raise ConfigError(f"'{path}' must be a table")
            out[key] = _merge(out[key], value, path + ".")
        else:
            out[key] = copy.deepcopy(value)
    return out


def load_file(path: str | Path) -> dict:
    """TOML config, or the ``config`` block of a JSON run manifest."""
    path = Path(path)
    try:
        if path.suffix == ".json":
            data = json.loads(path.read_text())
            return data["config"] if "config" in data else data
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except (OSError, ValueError, KeyError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def parse_override(item: str) -> tuple[list[str], Any]:
    """``section.key=value`` with a TOML value; bare words are taken as strings."""
    if "=" not in item:
        raise ConfigError(f"override '{item}' is not key=value")
    key, raw = item.split("=", 1)
    try:
        value = tomllib.loads(f"v = {raw}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw
    return key.strip().split("."), value


def _nest(keys: list[str], value: Any) -> dict:
    out: dict = {}
    cur = out
    for k in keys[:-1]:
        cur = cur.setdefault(k, {})
    cur[keys[-1]] = value
    return out


@dataclass
class CampaignConfig:
    task: str
    objective: str
    method: str | None
    seed: int
    out: Path
    quiet: bool
    sections: dict

    def as_dict(self) -> dict:
        """Fully resolved config; feeding it back reproduces the run."""
        d = copy.deepcopy(self.sections)
        d["campaign"] = {"task": self.task, "objective": self.objective,
                         "method": self.method or "", "seed": self.seed,
                         "out": str(self.out), "quiet": self.quiet}
        return d


def resolve(task: str, file_cfg: dict | None = None, overrides: list[str] = (),
            seed: int | None = None, out: str | None = None, quiet: bool | None = None,
            objective: str | None = None, method: str | None = None,
            env: dict | None = None) -> CampaignConfig:
    """Merge defaults < file < CLI flags; the seed env var beats everything."""
    env = os.environ if env is None else env
    cfg = _merge(DEFAULTS, file_cfg or {})
    for item in overrides:
        cfg = _merge(cfg, _nest(*parse_override(item)))
    camp = cfg["campaign"]
    camp["task"] = task
    if objective:
        camp["objective"] = objective
    if method:
        camp["method"] = method
    if seed is not None:
        camp["seed"] = seed
    if out is not None:
        camp["out"] = out
    if quiet is not None:
        camp["quiet"] = quiet
    if env.get(SEED_ENV):
        try:
            camp["seed"] = int(env[SEED_ENV])
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV} must be an integer") from exc

    if task not in COMBINATIONS:
        raise ConfigError(f"unknown task '{task}'")
    objs, methods, obj_default, method_default = COMBINATIONS[task]
    objective = camp["objective"] or obj_default
    method = camp["method"] or method_default
    if objective not in OBJECTIVES:
        raise ConfigError(f"unknown objective '{objective}'")
    if objective not in objs:
        raise ConfigError(f"task '{task}' does not support objective '{objective}'")
    if methods and method not in methods:
        raise ConfigError(f"task '{task}' does not support method '{method}'")
    if not methods:
        method = None
    seed_v = camp["seed"]
    if not isinstance(seed_v, int) or not 0 <= seed_v < 2 ** 64:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    sections = {k: v for k, v in cfg.items() if k != "campaign"}
    return CampaignConfig(task, objective, method, seed_v, Path(camp["out"]), bool(camp["quiet"]), sections)

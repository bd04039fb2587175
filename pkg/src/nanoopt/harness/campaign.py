"""Run one campaign: build the problem, execute the task, write CSV + JSON manifest.

Exit codes: 0 success, 2 configuration error, 3 numeric failure. The
manifest holds the fully resolved config, so ``--config <manifest.json>``
replays a run byte-for-byte. Wall time is logged, never written to files.
"""
from __future__ import annotations

import csv
import dataclasses
import json
import logging
import platform
import time
from pathlib import Path

import numpy as np

from .. import __version__
from ..errors import (
    ConfigError,
    CutoffNotFoundError,
    GeometryError,
    NonFiniteEnergyError,
    ObjectiveUndefinedError,
    UnboundedDirectionError,
)
from ..globalopt import GaConfig, SaConfig, anneal, decode, evolve, genome_str
from ..ljcluster import LJObjective, icosahedron13, seed_geometry, write_xyz
from ..localopt import METHODS, LocalOptConfig
from ..numcore import Bounds, Objective
from ..objectives import Quadratic, Rosenbrock, TiltedDoubleWell
from ..qwdevice import (
    BiasCondition,
    DeviceSpace,
    make_fitness,
    sweep_optimize,
    write_sweep_csv,
)
from ..rng import RngStream
from .config import CampaignConfig
from .gradcheck import gradient_check
from .oracle import brute_force_oracle

log = logging.getLogger("nanoopt")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
NUMERIC_ERRORS = (NonFiniteEnergyError, ObjectiveUndefinedError, UnboundedDirectionError,
                  CutoffNotFoundError, GeometryError, FloatingPointError)


class NumericFailure(RuntimeError):
    pass


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def manifest_path(out: Path) -> Path:
    return out.with_suffix(".manifest.json")


def build_objective(name: str, sections: dict) -> Objective:
    if name == "quadratic":
        q = sections["quadratic"]
        return Quadratic(q["A"], q["b"])
    if name == "rosenbrock":
        return Rosenbrock()
    if name == "doublewell":
        return TiltedDoubleWell()
    if name == "lj":
        return LJObjective(int(sections["lj"]["n_atoms"]))
    raise ConfigError(f"objective '{name}' is not a continuous objective")


def start_point(obj: Objective, sections: dict, x0: list, rng: RngStream) -> np.ndarray:
    if x0:
        if len(x0) != obj.dimension:
            raise ConfigError(f"x0 has {len(x0)} components, objective needs {obj.dimension}")
        return np.array(x0, dtype=float)
    if isinstance(obj, LJObjective):
        lj = sections["lj"]
        if lj["start"] == "icosahedron":
            if obj.n_atoms != 13:
                raise ConfigError("icosahedron start needs n_atoms = 13")
            return icosahedron13() + lj["perturbation"] * rng.normals(39)
        if lj["start"] != "random":
            raise ConfigError(f"unknown lj.start '{lj['start']}'")
        return seed_geometry(obj.n_atoms, rng, min_dist=lj["min_distance"]).coordinates
    if isinstance(obj, Rosenbrock):
        return np.array([-1.2, 1.0])
    if isinstance(obj, TiltedDoubleWell):
        return np.array([1.0])
    return np.zeros(obj.dimension)


def _bits(ga: dict, n: int) -> tuple[int, ...]:
    b = ga["bits_per_param"]
    bits = (int(b),) * n if isinstance(b, int) else tuple(int(v) for v in b)
    if len(bits) != n:
        raise ConfigError(f"bits_per_param needs {n} entries")
    return bits


def ga_config(cfg: CampaignConfig, bounds: Bounds, bits) -> GaConfig:
    ga = cfg.sections["ga"]
    try:
        return GaConfig(bounds=bounds, bits_per_param=bits,
                        population_size=int(ga["population_size"]),
                        generations=int(ga["generations"]),
                        crossover_prob=float(ga["crossover_prob"]),
                        mutation_rate=float(ga["mutation_rate"]),
                        elitism=int(ga["elitism"]), seed=cfg.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def device_space(cfg: CampaignConfig) -> DeviceSpace:
    dev = cfg.sections["device"]
    try:
        return DeviceSpace(Bounds(dev["lo"], dev["hi"]), _bits(cfg.sections["ga"], 4),
                           dict(dev["fixed"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def genome_problem(cfg: CampaignConfig):
    """(fitness, bounds, bits, describe) for evolve and oracle runs."""
    if cfg.objective == "qwdevice":
        dev = cfg.sections["device"]
        space = device_space(cfg)
        bias = BiasCondition(float(dev["f0_v_per_m"]), float(dev["frequency_hz"]))
        fitness = make_fitness(bias, space)

        def describe(g):
            p = space.params(g, bias.f0)
            return {"t_l_k": p.t_l, "t_e_k": p.t_e, "n2d_per_m2": p.n_2d, "l_z_m": p.l_z}

        return fitness, space.free_bounds, space.free_bits, describe
    obj = build_objective(cfg.objective, cfg.sections)
    bounds = obj.sample_bounds
    bits = _bits(cfg.sections["ga"], obj.dimension)

    def fitness(g):
        return -obj.energy(decode(g, bounds, bits))

    def describe(g):
        return {f"x{k}": v for k, v in enumerate(decode(g, bounds, bits))}

    return fitness, bounds, bits, describe


# -- tasks: each returns (result dict, list of written files) --------------------

def task_optimize(cfg: CampaignConfig):
    obj = build_objective(cfg.objective, cfg.sections)
    loc = cfg.sections["local"]
    rng = RngStream(cfg.seed)
    x0 = start_point(obj, cfg.sections, loc["x0"], rng)
    try:
        lcfg = LocalOptConfig(lam=float(loc["lam"]), mu=float(loc["mu"]), max_iter=int(loc["max_iter"]),
                              grad_tol=float(loc["grad_tol"]), use_backtracking=bool(loc["use_backtracking"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    report = METHODS[cfg.method](obj, x0, lcfg)
    write_csv(cfg.out, ("iteration", "energy"), report.trajectory)
    files = [cfg.out.name]
    if isinstance(obj, LJObjective):
        xyz = cfg.out.with_suffix(".xyz")
        write_xyz(xyz, report.best_point, report.best_value)
        files.append(xyz.name)
    result = {"best_value": report.best_value, "iterations": report.iterations,
              "termination": report.termination.value,
              "force_norm": float(np.linalg.norm(obj.force(report.best_point))),
              "best_point": [float(v) for v in report.best_point]}
    return result, files


def task_anneal(cfg: CampaignConfig):
    obj = build_objective(cfg.objective, cfg.sections)
    sa = cfg.sections["sa"]
    rng = RngStream(cfg.seed)
    x0 = start_point(obj, cfg.sections, sa["x0"], rng)
    overrides = {k: sa[k] for k in ("cooling_factor", "steps_per_temperature")}
    if sa["proposal_scale"] > 0:
        overrides["proposal_scale"] = sa["proposal_scale"]
    try:
        # calibration always draws its 100 samples, so explicit temperatures
        # leave the rest of the stream unchanged
        scfg = SaConfig.calibrated(obj, obj.sample_bounds, rng, seed=cfg.seed, **overrides)
        changes = {}
        if sa["t_initial"] > 0:
            changes["t_initial"] = float(sa["t_initial"])
            changes["t_final"] = float(sa["t_final"]) or 1e-4 * changes["t_initial"]
        elif sa["t_final"] > 0:
            changes["t_final"] = float(sa["t_final"])
        if changes:
            scfg = dataclasses.replace(scfg, **changes)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    report = anneal(obj, x0, scfg, rng)
    rows = [(k, (report.temperatures[k - 1] if k else scfg.t_initial), v) for k, v in report.trajectory]
    write_csv(cfg.out, ("temperature_index", "temperature", "best_energy"), rows)
    result = {"best_value": report.best_value, "best_point": [float(v) for v in report.best_point],
              "proposals": report.iterations, "accepted": report.accepted,
              "t_initial": scfg.t_initial, "t_final": scfg.t_final,
              "proposal_scale": scfg.proposal_scale}
    return result, [cfg.out.name]


def task_evolve(cfg: CampaignConfig):
    fitness, bounds, bits, describe = genome_problem(cfg)
    report = evolve(fitness, ga_config(cfg, bounds, bits))
    rows = [(g, b, m) for g, (b, m) in enumerate(zip(report.history_best, report.history_mean))]
    write_csv(cfg.out, ("generation", "best_fitness", "mean_fitness"), rows)
    result = {"best_genome": genome_str(report.best_genome), "best_fitness": report.best_value,
              "params": describe(report.best_genome),
              "nonfinite_evaluations": report.nonfinite_evaluations,
              "uniform_fallbacks": report.uniform_fallbacks}
    return result, [cfg.out.name]


def task_oracle(cfg: CampaignConfig):
    fitness, bounds, bits, describe = genome_problem(cfg)
    res = brute_force_oracle(fitness, sum(bits))
    params = describe(res.best_genome)
    header = ("best_genome", "best_fitness", "evaluations", *params)
    write_csv(cfg.out, header, [(genome_str(res.best_genome), res.best_fitness, res.evaluations, *params.values())])
    result = {"best_genome": genome_str(res.best_genome), "best_fitness": res.best_fitness,
              "evaluations": res.evaluations, "params": params}
    return result, [cfg.out.name]


def task_sweep(cfg: CampaignConfig):
    dev = cfg.sections["device"]
    space = device_space(cfg)
    ga = ga_config(cfg, space.free_bounds, space.free_bits)
    freqs = [float(f) for f in dev["frequencies_hz"]]
    if not freqs:
        raise ConfigError("device.frequencies_hz is empty")
    rows = sweep_optimize(freqs, float(dev["f0_v_per_m"]), ga, space=space)
    write_sweep_csv(rows, cfg.out)
    failed = [r.frequency_hz for r in rows if not r.ok]
    result = {"rows": len(rows), "failed_rows": failed}
    if failed:
        raise NumericFailure(f"{len(failed)} sweep rows failed")
    return result, [cfg.out.name]


def task_gradcheck(cfg: CampaignConfig):
    obj = build_objective(cfg.objective, cfg.sections)
    gc = cfg.sections["gradcheck"]
    rep = gradient_check(obj, int(gc["samples"]), cfg.seed, float(gc["threshold"]))
    write_csv(cfg.out, ("sample", "rel_error"), enumerate(rep.errors))
    result = {"max_rel_error": rep.max_rel_error, "threshold": rep.threshold, "passed": rep.passed}
    if not rep.passed:
        raise NumericFailure(f"gradient check failed: max relative error {rep.max_rel_error:.3e}")
    return result, [cfg.out.name]


TASKS = {
    "optimize": task_optimize, "ljmin": task_optimize, "anneal": task_anneal,
    "evolve": task_evolve, "oracle": task_oracle, "sweep": task_sweep,
    "gradcheck": task_gradcheck,
}


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, Path):
        return str(v)
    return v


def write_manifest(cfg: CampaignConfig, status: str, result: dict, files: list[str], error: str | None = None) -> Path:
    manifest = {
        "tool": "nanoopt",
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "rng": "PCG64 (XSL-RR 128/64), SplitMix64 seeding",
        "task": cfg.task,
        "seed": cfg.seed,
        "status": status,
        "config": cfg.as_dict(),
        "outputs": files,
        "result": result,
    }
    if error:
        manifest["error"] = error
    path = manifest_path(cfg.out)
    path.write_text(json.dumps(_jsonable(manifest), indent=2, sort_keys=True) + "\n")
    return path


def run_campaign(cfg: CampaignConfig) -> int:
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    try:
        result, files = TASKS[cfg.task](cfg)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except NumericFailure as exc:
        log.error("%s", exc)
        files = [p.name for p in (cfg.out,) if p.exists()]
        write_manifest(cfg, "failed", {}, files, str(exc))
        return EXIT_NUMERIC
    except NUMERIC_ERRORS as exc:
        log.error("numeric failure: %s", exc)
        partial = {}
        last = getattr(exc, "last_valid", None)
        if last is not None:
            partial["last_valid"] = [float(v) for v in last]
        files = [p.name for p in (cfg.out,) if p.exists()]
        write_manifest(cfg, "failed", partial, files, f"{type(exc).__name__}: {exc}")
        return EXIT_NUMERIC
    path = write_manifest(cfg, "ok", result, files)
    log.info("%s/%s/%s finished in %.2fs -> %s, %s", cfg.task, cfg.objective, cfg.method,
             time.perf_counter() - start, cfg.out, path.name)
    return EXIT_OK

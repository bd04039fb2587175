"""Binary-coded genetic algorithm: encoding, roulette selection, one-point crossover, mutation.

Genomes are 1-D ``uint8`` arrays of 0/1, most significant bit first within
each parameter field. Random draws are taken from an :class:`RngStream` in
this order, which fixes every result for a given seed:

1. initial population: ``population_size * P`` uniforms, row-major,
   bit = 1 when ``u < 0.5``;
2. per offspring pair: ``select`` (1 uniform), ``select`` (1 uniform),
   crossover decision (1 uniform, cross when ``u < crossover_prob``),
   the cut ``t = 1 + below(P - 1)`` (1 uniform, only when crossing),
   ``mutate`` child 1 (P uniforms), then ``mutate`` child 2 (P uniforms,
   skipped when the population has a single free slot left).

Fitness evaluation consumes no randomness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..numcore import Bounds, OptimizerReport, Termination
from ..rng import RngStream

SHIFT_EPS = 1e-12

Genome = np.ndarray


def genome(bits: str | Sequence[int]) -> Genome:
    """Genome from a string such as ``"100111011"`` or a sequence of 0/1."""
    if isinstance(bits, str):
        bits = [int(c) for c in bits]
    g = np.array(bits, dtype=np.uint8)
    if g.ndim != 1 or np.any(g > 1):
        raise ValueError("genome must be a flat sequence of 0/1")
    return g


def genome_str(g: Genome) -> str:
    return "".join("1" if b else "0" for b in g)


def genome_int(g: Genome) -> int:
    return int(genome_str(g), 2) if len(g) else 0


def _check_layout(bounds: Bounds, bits_per_param: Sequence[int]) -> None:
    if len(bits_per_param) != bounds.dimension:
        raise ValueError(f"{len(bits_per_param)} bit fields for {bounds.dimension} parameters")
    if any(b < 1 for b in bits_per_param):
        raise ValueError("each parameter needs at least one bit")


def encode(params, bounds: Bounds, bits_per_param: Sequence[int]) -> Genome:
    """Quantize each parameter to ``floor((v - lo)/(hi - lo) * (2^B - 1) + 0.5)``."""
    _check_layout(bounds, bits_per_param)
    params = np.asarray(params, dtype=float)
    if not bounds.contains(params):
        raise ValueError(f"parameters {params} outside bounds")
    bits: list[int] = []
    for v, lo, hi, nbits in zip(params, bounds.lo, bounds.hi, bits_per_param):
        top = (1 << nbits) - 1
        level = min(top, int(math.floor((v - lo) / (hi - lo) * top + 0.5)))
        bits.extend(int(c) for c in format(level, f"0{nbits}b"))
    return np.array(bits, dtype=np.uint8)


def decode(g: Genome, bounds: Bounds, bits_per_param: Sequence[int]) -> np.ndarray:
    _check_layout(bounds, bits_per_param)
    if len(g) != sum(bits_per_param):
        raise ValueError(f"genome length {len(g)} != {sum(bits_per_param)}")
    out = np.empty(bounds.dimension)
    pos = 0
    for k, nbits in enumerate(bits_per_param):
        level = 0
        for b in g[pos:pos + nbits]:
            level = (level << 1) | int(b)
        pos += nbits
        lo, hi = bounds.lo[k], bounds.hi[k]
        v = lo + (hi - lo) * level / ((1 << nbits) - 1)
        out[k] = min(hi, max(lo, v))
    return out


def select(fitnesses: Sequence[float], rng) -> int:
    """Roulette wheel: index i with probability fitness_i / sum(fitness).

    Fitnesses must be non-negative. A zero total falls back to a uniform pick.
    Consumes exactly one uniform.
    """
    w = np.asarray(fitnesses, dtype=float)
    if w.size == 0:
        raise ValueError("empty fitness list")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("roulette weights must be finite and non-negative")
    u = rng.uniform()
    total = float(w.sum())
    if total <= 0.0:
        return min(int(u * w.size), w.size - 1)
    target = u * total
    cum = 0.0
    for i, wi in enumerate(w):
        cum += wi
        if cum > target:
            return i
    return int(np.flatnonzero(w > 0)[-1])


def roulette_weights(fitnesses: np.ndarray) -> np.ndarray:
    """Shift so the minimum sits at ``SHIFT_EPS`` when any fitness is negative."""
    f = np.asarray(fitnesses, dtype=float)
    lo = float(f.min())
    if lo < 0.0:
        return f - lo + SHIFT_EPS
    return f


def crossover(x: Genome, y: Genome, t: int) -> tuple[Genome, Genome]:
    """One-point crossover: children swap positions t+1..P (1-based) of the parents."""
    if len(x) != len(y):
        raise ValueError("parents differ in length")
    P = len(x)
    if not 1 <= t <= P - 1:
        raise ValueError(f"crossover site {t} outside [1, {P - 1}]")
    c1 = np.concatenate([x[:t], y[t:]])
    c2 = np.concatenate([y[:t], x[t:]])
    return c1, c2


def mutate(g: Genome, rate: float, rng) -> Genome:
    """Flip each bit independently with probability ``rate`` (one uniform per bit)."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError("mutation rate must lie in [0, 1]")
    flips = rng.uniforms(len(g)) < rate
    return np.where(flips, 1 - g, g).astype(np.uint8)


def mutate_many(pop: np.ndarray, rate: float, rng) -> np.ndarray:
    """Row-wise ``mutate`` over a 2-D population, same stream order as row-by-row calls."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError("mutation rate must lie in [0, 1]")
    pop = np.asarray(pop, dtype=np.uint8)
    flips = (rng.uniforms(pop.size) < rate).reshape(pop.shape)
    return np.where(flips, 1 - pop, pop).astype(np.uint8)


@dataclass(frozen=True)
class GaConfig:
    bounds: Bounds
    bits_per_param: tuple[int, ...]
    population_size: int = 20
    generations: int = 100
    crossover_prob: float = 0.9
    mutation_rate: float = 0.001
    elitism: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "bits_per_param", tuple(int(b) for b in self.bits_per_param))
        _check_layout(self.bounds, self.bits_per_param)
        if self.population_size < 2 or self.population_size % 2:
            raise ValueError("population_size must be even and >= 2")
        if self.generations < 0:
            raise ValueError("generations must be >= 0")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError("crossover_prob must lie in [0, 1]")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must lie in [0, 1]")
        if not 0 <= self.elitism < self.population_size:
            raise ValueError("elitism must satisfy 0 <= elitism < population_size")

    @property
    def genome_length(self) -> int:
        return sum(self.bits_per_param)


@dataclass
class GaReport(OptimizerReport):
    best_genome: Genome | None = None
    history_best: list[float] = field(default_factory=list)
    history_mean: list[float] = field(default_factory=list)
    nonfinite_evaluations: int = 0
    uniform_fallbacks: int = 0

    @property
    def best_fitness(self) -> float:
        return self.best_value


def evolve(fitness: Callable[[Genome], float], cfg: GaConfig, rng: RngStream | None = None) -> GaReport:
    """Generational GA maximizing ``fitness``.

    Each generation: evaluate, copy the top ``elitism`` genomes unchanged, then
    refill with selected, crossed and mutated children. Non-finite fitness
    values count as 0 and are tallied in the report.
    """
    rng = rng if rng is not None else RngStream(cfg.seed)
    P = cfg.genome_length
    n = cfg.population_size
    pop = (rng.uniforms(n * P) < 0.5).astype(np.uint8).reshape(n, P)

    cache: dict[bytes, float] = {}
    nonfinite = 0
    fallbacks = 0

    def evaluate(population: np.ndarray) -> np.ndarray:
        nonlocal nonfinite
        out = np.empty(len(population))
        for k, g in enumerate(population):
            key = g.tobytes()
            if key not in cache:
                v = float(fitness(g.copy()))
                if not math.isfinite(v):
                    nonfinite += 1
                    v = 0.0
                cache[key] = v
            out[k] = cache[key]
        return out

    best_g, best_f = None, -math.inf
    hist_best: list[float] = []
    hist_mean: list[float] = []
    trajectory: list[tuple[int, float]] = []

    for gen in range(cfg.generations + 1):
        fit = evaluate(pop)
        order = np.argsort(-fit, kind="stable")
        if fit[order[0]] > best_f:
            best_f = float(fit[order[0]])
            best_g = pop[order[0]].copy()
        hist_best.append(float(fit[order[0]]))
        hist_mean.append(float(fit.mean()))
        trajectory.append((gen, float(fit[order[0]])))
        if gen == cfg.generations:
            break

        weights = roulette_weights(fit)
        if float(weights.sum()) <= 0.0:
            fallbacks += 1
        nxt = [pop[i].copy() for i in order[:cfg.elitism]]
        while len(nxt) < n:
            a = pop[select(weights, rng)]
            b = pop[select(weights, rng)]
            if rng.uniform() < cfg.crossover_prob and P >= 2:
                c1, c2 = crossover(a, b, 1 + rng.below(P - 1))
            else:
                c1, c2 = a.copy(), b.copy()
            nxt.append(mutate(c1, cfg.mutation_rate, rng))
            if len(nxt) < n:
                nxt.append(mutate(c2, cfg.mutation_rate, rng))
        pop = np.array(nxt, dtype=np.uint8)

    return GaReport(
        best_point=decode(best_g, cfg.bounds, cfg.bits_per_param),
        best_value=best_f,
        iterations=cfg.generations,
        termination=Termination.MAX_ITER,
        trajectory=trajectory,
        seed=rng.seed,
        best_genome=best_g,
        history_best=hist_best,
        history_mean=hist_mean,
        nonfinite_evaluations=nonfinite,
        uniform_fallbacks=fallbacks,
    )

"""Simulated annealing with Metropolis acceptance and a geometric cooling ladder."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import NonFiniteEnergyError
from ..numcore import Bounds, Objective, OptimizerReport, Termination, as_vector
from ..rng import RngStream


@dataclass(frozen=True)
class SaConfig:
    t_initial: float
    t_final: float
    cooling_factor: float = 0.95
    steps_per_temperature: int = 100
    proposal_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not (self.t_initial > 0 and self.t_final > 0):
            raise ValueError("temperatures must be > 0")
        if self.t_final > self.t_initial:
            raise ValueError("t_final must not exceed t_initial")
        if not 0.0 < self.cooling_factor < 1.0:
            raise ValueError("cooling_factor must lie in (0, 1)")
        if self.steps_per_temperature < 1:
            raise ValueError("steps_per_temperature must be >= 1")
        if not self.proposal_scale > 0:
            raise ValueError("proposal_scale must be > 0")

    def temperatures(self) -> list[float]:
        """T_k = t_initial * cooling_factor**k, up to and including the first T_k <= t_final."""
        temps = []
        k = 0
        while True:
            t = self.t_initial * self.cooling_factor ** k
            temps.append(t)
            if t <= self.t_final:
                return temps
            k += 1

    @classmethod
    def calibrated(cls, obj: Objective, bounds: Bounds, rng, samples: int = 100, **overrides) -> "SaConfig":
        """Defaults tied to the objective's scale.

        ``t_initial`` is the sample standard deviation of E over ``samples``
        uniform points in ``bounds``; ``t_final = 1e-4 * t_initial``;
        ``proposal_scale`` is a quarter of the mean box width.
        """
        energies = [obj.energy(bounds.sample(rng)) for _ in range(samples)]
        energies = [e for e in energies if math.isfinite(e)]
        t0 = float(np.std(energies, ddof=1)) if len(energies) > 1 else 1.0
        if not t0 > 0:
            t0 = 1.0
        width = float(np.mean(np.array(bounds.hi) - np.array(bounds.lo)))
        params = dict(t_initial=t0, t_final=1e-4 * t0, proposal_scale=0.25 * width)
        params.update(overrides)
        return cls(**params)


def metropolis_accept(delta_e: float, t: float, rng) -> bool:
    """Downhill always; uphill with probability exp(-delta_e / t).

    Draws one uniform only for uphill moves.
    """
    if not t > 0:
        raise ValueError("temperature must be > 0")
    if delta_e <= 0.0:
        return True
    return rng.uniform() < math.exp(-delta_e / t)


@dataclass
class AnnealReport(OptimizerReport):
    temperatures: list[float] = field(default_factory=list)
    accepted: int = 0
    final_point: np.ndarray | None = None


def anneal(obj: Objective, x0, cfg: SaConfig, rng: RngStream | None = None) -> AnnealReport:
    """Metropolis walk on a cooling ladder, tracking the best point ever visited.

    At temperature T each proposal adds ``proposal_scale * T / t_initial``
    times a vector of standard normals (one ``normal()`` per coordinate, in
    order). Proposals with energy ``+inf`` are rejected without a draw.
    """
    rng = rng if rng is not None else RngStream(cfg.seed)
    x = as_vector(x0, obj.dimension, "x0")
    e = obj.energy(x)
    if not math.isfinite(e):
        raise NonFiniteEnergyError("non-finite energy at starting point", x, 0)
    best_x, best_e = x.copy(), float(e)
    temps = cfg.temperatures()
    trajectory = [(0, best_e)]
    accepted = 0
    step = 0
    for k, t in enumerate(temps):
        scale = cfg.proposal_scale * t / cfg.t_initial
        for _ in range(cfg.steps_per_temperature):
            step += 1
            xn = x + scale * rng.normals(obj.dimension)
            en = obj.energy(xn)
            if math.isnan(en):
                raise NonFiniteEnergyError(f"energy is NaN at step {step}", x.copy(), step)
            if en == math.inf:
                continue
            if metropolis_accept(en - e, t, rng):
                x, e = xn, en
                accepted += 1
                if e < best_e:
                    best_x, best_e = x.copy(), float(e)
        trajectory.append((k + 1, best_e))
    return AnnealReport(
        best_point=best_x,
        best_value=best_e,
        iterations=step,
        termination=Termination.MAX_ITER,
        trajectory=trajectory,
        seed=rng.seed,
        temperatures=temps,
        accepted=accepted,
        final_point=x,
    )

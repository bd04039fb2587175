"""GaAs quantum-well device tuning: constants, response model, f3dB cutoff, GA fitness, sweeps.

A full hot-electron mobility model is not
available, so the response model is a pluggable callable
``model(params, constants, omega) -> mu_ac``. The shipped reference is a
Drude surrogate

    mu_ac(omega) = (e tau / m*) / sqrt(1 + (omega tau)^2),   tau = tau0 / R(p)

    R(p) = c_ac (T_e / 300 K) (100 nm / L_z)
         + c_pop [N_B(T_L) + N_B(T_e)]
         + c_imp (n_bi / 1e21 m^-3) (1e16 m^-2 / n_2D)

with the Bose factor N_B(T) = 1 / (exp(hbar omega_0 / k_B T) - 1). Only
m*, omega_0 and n_bi enter; the remaining material constants are carried
for completeness.
"""
from __future__ import annotations

import csv
import dataclasses
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Protocol, Sequence

import numpy as np

from .errors import CutoffNotFoundError
from .globalopt.genetic import GaConfig, Genome, decode, evolve
from .numcore import Bounds

log = logging.getLogger(__name__)

E_CHARGE = 1.602176634e-19
HBAR = 1.054571817e-34
K_B = 1.380649e-23
INV_SQRT2 = 1.0 / math.sqrt(2.0)
OMEGA_HI_MAX = 1e18

PARAM_NAMES = ("t_l", "t_e", "n_2d", "l_z")
DEFAULT_BOUNDS = Bounds((77.0, 77.0, 5e15, 85e-9), (300.0, 400.0, 1e16, 125e-9))
SWEEP_FREQUENCIES_GHZ = (110, 135, 160, 180, 210, 230, 250)


@dataclass(frozen=True)
class MaterialConstants:
    """GaAs quantum-well constants in SI units."""

    m_star: float = 0.3735e-31       # kg
    k_s: float = 13.88               # static dielectric constant
    k_a: float = 11.34               # optic dielectric constant
    omega_0: float = 5.37e13         # LO phonon, rad/s
    c_l: float = 14.03e10            # N/m^2
    e_1: float = 17.6e11             # J, as printed; unused by the surrogate
    n_bi: float = 6.0e21             # m^-3
    u_l: float = 5.22e3              # m/s

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"{f.name} must be positive")
        if not self.k_a < self.k_s:
            raise ValueError("optic dielectric constant must be below the static one")


GAAS = MaterialConstants()


@dataclass(frozen=True)
class DeviceParams:
    t_l: float     # lattice temperature, K
    t_e: float     # electron temperature, K
    n_2d: float    # carrier concentration, m^-2
    l_z: float     # channel width, m

    def as_array(self) -> np.ndarray:
        return np.array([self.t_l, self.t_e, self.n_2d, self.l_z])

    @classmethod
    def from_array(cls, v) -> "DeviceParams":
        return cls(*(float(x) for x in v))


def repair(p: DeviceParams) -> DeviceParams:
    """Raise T_e to T_L when the hot-electron ordering is violated; identity otherwise."""
    if p.t_e >= p.t_l:
        return p
    return dataclasses.replace(p, t_e=p.t_l)


@dataclass(frozen=True)
class BiasCondition:
    f0: float                 # dc bias field, V/m
    target_frequency: float   # applied ac frequency, Hz

    def __post_init__(self):
        if not (self.f0 > 0 and self.target_frequency > 0):
            raise ValueError("bias field and frequency must be positive")


class ResponseModel(Protocol):
    def __call__(self, p: DeviceParams, c: MaterialConstants, omega: float) -> float: ...


def bose_factor(temperature: float, c: MaterialConstants = GAAS) -> float:
    if temperature <= 0.0:
        return 0.0
    x = HBAR * c.omega_0 / (K_B * temperature)
    # exp overflows past ~709; the factor is below 1e-308 there anyway
    return 0.0 if x > 700.0 else 1.0 / math.expm1(x)


@dataclass(frozen=True)
class DrudeSurrogate:
    """Reference response model (see module docstring)."""

    c_ac: float = 1.0
    c_pop: float = 1.0
    c_imp: float = 0.1
    tau0: float = 1e-12

    def scattering_rates(self, p: DeviceParams, c: MaterialConstants) -> tuple[float, float, float]:
        r_ac = self.c_ac * (p.t_e / 300.0) * (100e-9 / p.l_z)
        r_pop = self.c_pop * (bose_factor(p.t_l, c) + bose_factor(p.t_e, c))
        r_imp = self.c_imp * (c.n_bi / 1e21) * (1e16 / p.n_2d)
        return r_ac, r_pop, r_imp

    def relaxation_time(self, p: DeviceParams, c: MaterialConstants) -> float:
        return self.tau0 / sum(self.scattering_rates(p, c))

    def __call__(self, p: DeviceParams, c: MaterialConstants, omega: float) -> float:
        if omega < 0:
            raise ValueError("omega must be >= 0")
        tau = self.relaxation_time(p, c)
        return (E_CHARGE * tau / c.m_star) / math.sqrt(1.0 + (omega * tau) ** 2)

    def closed_form_cutoff(self, p: DeviceParams, c: MaterialConstants) -> float:
        return 1.0 / (2.0 * math.pi * self.relaxation_time(p, c))


SURROGATE = DrudeSurrogate()


def relaxation_time(p: DeviceParams, c: MaterialConstants = GAAS) -> float:
    return SURROGATE.relaxation_time(p, c)


def ac_mobility(p: DeviceParams, c: MaterialConstants = GAAS, omega: float = 0.0) -> float:
    return SURROGATE(p, c, omega)


def cutoff_frequency(p: DeviceParams, c: MaterialConstants = GAAS,
                     model: ResponseModel = SURROGATE, rel_tol: float = 1e-12) -> float:
    """Frequency (Hz) where mu_ac falls to 1/sqrt(2) of its zero-frequency value.

    Brackets by doubling omega from 1e9 rad/s, then bisects.
    """
    target = INV_SQRT2 * model(p, c, 0.0)
    lo, hi = 0.0, 1e9
    while model(p, c, hi) > target:
        lo = hi
        hi *= 2.0
        if hi > OMEGA_HI_MAX:
            raise CutoffNotFoundError("cutoff not found")
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if model(p, c, mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi) / (2.0 * math.pi)


@dataclass(frozen=True)
class DeviceSpace:
    """Genome layout over (T_L, T_e, n_2D, L_z).

    Parameters named in ``fixed`` are pinned and left out of the genome.
    ``te_floor`` optionally maps the bias field F0 to a minimum electron
    temperature (disabled by default).
    """

    bounds: Bounds = DEFAULT_BOUNDS
    bits_per_param: tuple[int, ...] = (4, 4, 4, 4)
    fixed: Mapping[str, float] = field(default_factory=dict)
    te_floor: Callable[[float], float] | None = None

    def __post_init__(self):
        if self.bounds.dimension != 4 or len(self.bits_per_param) != 4:
            raise ValueError("device space needs bounds and bits for all four parameters")
        unknown = set(self.fixed) - set(PARAM_NAMES)
        if unknown:
            raise ValueError(f"unknown fixed parameters: {sorted(unknown)}")
        if len(self.fixed) == 4:
            raise ValueError("at least one parameter must be free")

    @property
    def free(self) -> tuple[int, ...]:
        return tuple(k for k, name in enumerate(PARAM_NAMES) if name not in self.fixed)

    @property
    def free_bounds(self) -> Bounds:
        return Bounds(tuple(self.bounds.lo[k] for k in self.free), tuple(self.bounds.hi[k] for k in self.free))

    @property
    def free_bits(self) -> tuple[int, ...]:
        return tuple(self.bits_per_param[k] for k in self.free)

    @property
    def genome_length(self) -> int:
        return sum(self.free_bits)

    def params(self, g: Genome, f0: float | None = None) -> DeviceParams:
        """Decode and repair."""
        values = dict(self.fixed)
        for k, v in zip(self.free, decode(g, self.free_bounds, self.free_bits)):
            values[PARAM_NAMES[k]] = float(v)
        p = repair(DeviceParams(**values))
        if self.te_floor is not None and f0 is not None:
            floor = min(self.te_floor(f0), self.bounds.hi[1])
            if p.t_e < floor:
                p = dataclasses.replace(p, t_e=floor)
        return p


def device_fitness(g: Genome, bias: BiasCondition, space: DeviceSpace = DeviceSpace(),
                   c: MaterialConstants = GAAS, model: ResponseModel = SURROGATE) -> float:
    """mu_ac at the target frequency for the decoded, repaired device; higher is fitter."""
    p = space.params(g, bias.f0)
    return model(p, c, 2.0 * math.pi * bias.target_frequency)


def make_fitness(bias: BiasCondition, space: DeviceSpace = DeviceSpace(),
                 c: MaterialConstants = GAAS, model: ResponseModel = SURROGATE) -> Callable[[Genome], float]:
    def fitness(g: Genome) -> float:
        return device_fitness(g, bias, space, c, model)
    return fitness


SWEEP_COLUMNS = (
    "frequency_hz", "f0_v_per_m", "t_l_k", "t_e_k", "n2d_per_m2",
    "l_z_m", "mu_ac_m2_per_vs", "f3db_hz", "seed",
)


@dataclass(frozen=True)
class SweepRow:
    frequency_hz: float
    f0_v_per_m: float
    t_l_k: float
    t_e_k: float
    n2d_per_m2: float
    l_z_m: float
    mu_ac_m2_per_vs: float
    f3db_hz: float
    seed: int
    ok: bool = True

    @property
    def params(self) -> DeviceParams:
        return DeviceParams(self.t_l_k, self.t_e_k, self.n2d_per_m2, self.l_z_m)


def optimize_at(frequency: float, f0: float, ga: GaConfig, space: DeviceSpace = DeviceSpace(),
                c: MaterialConstants = GAAS, model: ResponseModel = SURROGATE):
    """One GA run at a single frequency; returns (SweepRow, GaReport)."""
    bias = BiasCondition(f0, frequency)
    cfg = dataclasses.replace(ga, bounds=space.free_bounds, bits_per_param=space.free_bits)
    report = evolve(make_fitness(bias, space, c, model), cfg)
    p = space.params(report.best_genome, f0)
    row = SweepRow(
        frequency_hz=frequency, f0_v_per_m=f0,
        t_l_k=p.t_l, t_e_k=p.t_e, n2d_per_m2=p.n_2d, l_z_m=p.l_z,
        mu_ac_m2_per_vs=model(p, c, 2.0 * math.pi * frequency),
        f3db_hz=cutoff_frequency(p, c, model),
        seed=cfg.seed,
    )
    return row, report


def sweep_optimize(frequencies: Sequence[float], bias_f0: float, ga: GaConfig,
                   c: MaterialConstants = GAAS, model: ResponseModel = SURROGATE,
                   space: DeviceSpace = DeviceSpace()) -> list[SweepRow]:
    """One GA-optimized row per frequency; row i uses seed ``ga.seed + i``.

    A row whose GA or cutoff search fails is emitted with NaN values and
    ``ok=False``; the sweep continues.
    """
    if not frequencies:
        raise ValueError("empty frequency list")
    rows = []
    for i, freq in enumerate(frequencies):
        cfg = dataclasses.replace(ga, seed=ga.seed + i)
        try:
            row, _ = optimize_at(float(freq), bias_f0, cfg, space, c, model)
        except (ArithmeticError, ValueError, CutoffNotFoundError) as exc:
            log.warning("sweep row %d (%.6g Hz) failed: %s", i, freq, exc)
            nan = math.nan
            row = SweepRow(float(freq), bias_f0, nan, nan, nan, nan, nan, nan, cfg.seed, ok=False)
        rows.append(row)
    return rows


def _fmt(v) -> str:
    return str(v) if isinstance(v, (int, np.integer)) else format(float(v), ".17g")


def write_sweep_csv(rows: Sequence[SweepRow], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for r in rows:
            w.writerow([_fmt(getattr(r, col)) for col in SWEEP_COLUMNS])


def read_sweep_csv(path: str | Path) -> list[SweepRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != SWEEP_COLUMNS:
            raise ValueError(f"unexpected sweep columns {reader.fieldnames}")
        rows = []
        for rec in reader:
            vals = {k: float(rec[k]) for k in SWEEP_COLUMNS if k != "seed"}
            ok = not any(math.isnan(v) for v in vals.values())
            rows.append(SweepRow(**vals, seed=int(rec["seed"]), ok=ok))
        return rows

"""Lennard-Jones clusters: energy, analytic force, seeding and XYZ output."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import GeometryError
from .numcore import Bounds, Objective, as_vector

COINCIDENCE = 1e-10


@dataclass(frozen=True)
class ClusterConfig:
    n_atoms: int
    coordinates: np.ndarray
    epsilon: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        if self.n_atoms < 2:
            raise GeometryError("need at least two atoms")
        xyz = as_vector(self.coordinates, 3 * self.n_atoms, "coordinates")
        object.__setattr__(self, "coordinates", xyz)
        if min_distance(xyz) <= COINCIDENCE * self.sigma:
            raise GeometryError("coincident atoms")

    @property
    def positions(self) -> np.ndarray:
        return self.coordinates.reshape(self.n_atoms, 3)


def _pair_table(x: np.ndarray):
    pos = x.reshape(-1, 3)
    i, j = np.triu_indices(len(pos), k=1)
    diff = pos[i] - pos[j]
    r2 = np.einsum("ij,ij->i", diff, diff)
    return pos, i, j, diff, r2


def min_distance(x: np.ndarray) -> float:
    _, _, _, _, r2 = _pair_table(np.asarray(x, dtype=float))
    return float(np.sqrt(r2.min()))


def lj_energy_flat(x: np.ndarray, epsilon: float = 1.0, sigma: float = 1.0) -> float:
    _, _, _, _, r2 = _pair_table(x)
    if np.any(r2 <= (COINCIDENCE * sigma) ** 2):
        raise GeometryError("coincident atoms")
    s6 = (sigma * sigma / r2) ** 3
    return float(np.sum(4.0 * epsilon * (s6 * s6 - s6)))


def lj_force_flat(x: np.ndarray, epsilon: float = 1.0, sigma: float = 1.0) -> np.ndarray:
    pos, i, j, diff, r2 = _pair_table(x)
    if np.any(r2 <= (COINCIDENCE * sigma) ** 2):
        raise GeometryError("coincident atoms")
    s6 = (sigma * sigma / r2) ** 3
    # -dE/dr / r for each pair
    coef = 24.0 * epsilon * (2.0 * s6 * s6 - s6) / r2
    fij = coef[:, None] * diff
    forces = np.zeros_like(pos)
    np.add.at(forces, i, fij)
    np.add.at(forces, j, -fij)
    return forces.reshape(-1)


def lj_energy(cfg: ClusterConfig) -> float:
    return lj_energy_flat(cfg.coordinates, cfg.epsilon, cfg.sigma)


def lj_gradient(cfg: ClusterConfig) -> np.ndarray:
    """Analytic force -grad E (the sign convention of the objective contract)."""
    return lj_force_flat(cfg.coordinates, cfg.epsilon, cfg.sigma)


class LJObjective(Objective):
    name = "lj"

    def __init__(self, n_atoms: int, epsilon: float = 1.0, sigma: float = 1.0):
        if n_atoms < 2:
            raise GeometryError("need at least two atoms")
        self.n_atoms = n_atoms
        self.epsilon = epsilon
        self.sigma = sigma
        self.dimension = 3 * n_atoms
        side = cube_side(n_atoms, sigma)
        self.sample_bounds = Bounds((0.0,) * self.dimension, (side,) * self.dimension)

    def energy(self, x):
        try:
            return lj_energy_flat(x, self.epsilon, self.sigma)
        except GeometryError:
            return math.inf

    def force(self, x):
        try:
            return lj_force_flat(x, self.epsilon, self.sigma)
        except GeometryError:
            return np.full(self.dimension, np.nan)


def cube_side(n: int, sigma: float = 1.0) -> float:
    return n ** (1.0 / 3.0) * 1.2 * sigma


def seed_geometry(n: int, rng, sigma: float = 1.0, epsilon: float = 1.0,
                  min_dist: float | None = None, max_attempts: int = 1000) -> ClusterConfig:
    """Atoms placed uniformly in a cube of side n^(1/3) * 1.2 sigma.

    Atoms are placed in order; an atom closer than ``min_dist`` (default the
    coincidence threshold) to an earlier one is redrawn, at most
    ``max_attempts`` times per atom. Draw order: x, y, z uniforms per attempt.
    """
    if n < 2:
        raise GeometryError("need at least two atoms")
    side = cube_side(n, sigma)
    limit = COINCIDENCE * sigma if min_dist is None else min_dist
    placed: list[np.ndarray] = []
    for _ in range(n):
        for _attempt in range(max_attempts):
            p = np.array([side * rng.uniform() for _ in range(3)])
            if all(np.linalg.norm(p - q) > limit for q in placed):
                placed.append(p)
                break
        else:
            raise GeometryError(f"could not place atom {len(placed)} after {max_attempts} attempts")
    return ClusterConfig(n, np.concatenate(placed), epsilon, sigma)


def icosahedron13(radius: float = 1.1) -> np.ndarray:
    """Centered 13-atom icosahedron; ``radius`` is the center-to-vertex distance."""
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    verts = []
    for a in (-1.0, 1.0):
        for b in (-phi, phi):
            verts += [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)]
    v = np.array(verts)
    v *= radius / np.linalg.norm(v[0])
    return np.vstack([np.zeros(3), v]).reshape(-1)


def format_xyz(coordinates: np.ndarray, energy: float, symbol: str = "LJ") -> str:
    pos = np.asarray(coordinates, dtype=float).reshape(-1, 3)
    # repr is the shortest string that round-trips the double
    lines = [str(len(pos)), f"energy={float(energy)!r}"]
    lines += [f"{symbol} {float(x)!r} {float(y)!r} {float(z)!r}" for x, y, z in pos]
    return "\n".join(lines) + "\n"


def write_xyz(path: str | Path, coordinates: np.ndarray, energy: float) -> None:
    Path(path).write_text(format_xyz(coordinates, energy))


def read_xyz(path: str | Path) -> tuple[np.ndarray, str]:
    lines = Path(path).read_text().splitlines()
    n = int(lines[0])
    coords = [list(map(float, ln.split()[1:4])) for ln in lines[2:2 + n]]
    return np.array(coords).reshape(-1), lines[1]

"""Analytic force vs central finite differences on random points."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..ljcluster import LJObjective, seed_geometry
from ..numcore import Objective, finite_diff_gradient
from ..rng import RngStream

THRESHOLD = 1e-4


@dataclass
class GradCheckReport:
    objective: str
    errors: list[float]
    threshold: float

    @property
    def max_rel_error(self) -> float:
        return max(self.errors)

    @property
    def passed(self) -> bool:
        return self.max_rel_error <= self.threshold


def sample_point(obj: Objective, rng) -> np.ndarray:
    if isinstance(obj, LJObjective):
        return seed_geometry(obj.n_atoms, rng, obj.sigma, obj.epsilon).coordinates
    return obj.sample_bounds.sample(rng)


def relative_force_error(obj: Objective, x: np.ndarray) -> float:
    """||f(x) + grad_fd(x)|| / (1 + ||f(x)||)."""
    f = obj.force(x)
    g = finite_diff_gradient(obj, x)
    return float(np.linalg.norm(f + g) / (1.0 + np.linalg.norm(f)))


def gradient_check(obj: Objective, samples: int = 100, seed: int = 0,
                   threshold: float = THRESHOLD) -> GradCheckReport:
    rng = RngStream(seed)
    errors = [relative_force_error(obj, sample_point(obj, rng)) for _ in range(samples)]
    return GradCheckReport(obj.name, errors, threshold)

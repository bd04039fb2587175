"""Shared numeric vocabulary: vectors, bounds, objectives, line search, FD gradients.

Vectors are 1-D float64 numpy arrays. Every public entry point passes its
inputs through :func:`as_vector`, which fixes the dimension and rejects
non-finite components, so optimizer state never holds NaN/Inf and never
relies on numpy broadcasting between mismatched shapes.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, ObjectiveUndefinedError, UnboundedDirectionError

LINE_TOL = 1e-10
ALPHA_MAX = 1e10


def as_vector(x, dim: int | None = None, name: str = "x") -> np.ndarray:
    """Validated copy of ``x`` as a finite 1-D float64 vector."""
    v = np.atleast_1d(np.array(x, dtype=np.float64))
    if v.ndim != 1 or v.size < 1:
        raise DimensionError(f"{name} must be a non-empty 1-D vector, got shape {v.shape}")
    if dim is not None and v.size != dim:
        raise DimensionError(f"{name} has dimension {v.size}, expected {dim}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite components")
    return v


def same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if np.shape(a) != np.shape(b):
        raise DimensionError(f"dimension mismatch: {np.shape(a)} vs {np.shape(b)}")


@dataclass(frozen=True)
class Bounds:
    """Per-dimension closed intervals ``[lo, hi]`` with ``lo < hi``."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(lo) != len(hi) or not lo:
            raise DimensionError("bounds need matching, non-empty lo/hi")
        for k, (a, b) in enumerate(zip(lo, hi)):
            if not (math.isfinite(a) and math.isfinite(b) and a < b):
                raise ValueError(f"bounds dimension {k}: need finite lo < hi, got [{a}, {b}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[float, float]]) -> "Bounds":
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @property
    def dimension(self) -> int:
        return len(self.lo)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return x.shape == (self.dimension,) and bool(
            np.all(x >= np.array(self.lo)) and np.all(x <= np.array(self.hi))
        )

    def sample(self, rng) -> np.ndarray:
        """Uniform point inside the box; one ``rng.uniform()`` per dimension, in order."""
        return np.array([a + (b - a) * rng.uniform() for a, b in zip(self.lo, self.hi)])


class Objective:
    """Contract for E(x) and the force f(x) = -grad E(x).

    Subclasses set ``dimension`` and implement ``energy`` and ``force``.
    ``sample_bounds`` is the box used for random test points and SA
    temperature calibration.
    """

    name = "objective"
    dimension: int
    sample_bounds: Bounds | None = None

    def energy(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def force(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def energy_and_force(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        return self.energy(x), self.force(x)


class Termination(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"
    STALLED = "stalled"


@dataclass
class OptimizerReport:
    best_point: np.ndarray
    best_value: float
    iterations: int
    termination: Termination
    trajectory: list[tuple[int, float]] | None = None
    seed: int | None = None
    path: list[np.ndarray] | None = field(default=None, repr=False)

    @property
    def converged(self) -> bool:
        return self.termination is Termination.CONVERGED


def default_fd_step(x: np.ndarray) -> np.ndarray:
    return 1e-6 * (1.0 + np.abs(x))


def finite_diff_gradient(obj: Objective, x, h: float | np.ndarray | None = None) -> np.ndarray:
    """Central-difference gradient of ``obj.energy`` at ``x``.

    ``h`` may be a scalar or per-component steps; by default
    ``1e-6 * (1 + |x_k|)``.
    """
    x = as_vector(x)
    if h is None:
        steps = default_fd_step(x)
    else:
        steps = np.broadcast_to(np.asarray(h, dtype=float), x.shape)
        if np.any(steps <= 0):
            raise ValueError("finite-difference step must be positive")
    grad = np.empty_like(x)
    probe = x.copy()
    for k in range(x.size):
        hk = steps[k]
        probe[k] = x[k] + hk
        e_plus = obj.energy(probe)
        probe[k] = x[k] - hk
        e_minus = obj.energy(probe)
        probe[k] = x[k]
        if not (math.isfinite(e_plus) and math.isfinite(e_minus)):
            raise ObjectiveUndefinedError("objective undefined near x")
        grad[k] = (e_plus - e_minus) / (2.0 * hk)
    return grad


def line_minimize(obj: Objective, x, d, tol: float = LINE_TOL, alpha_max: float = ALPHA_MAX) -> float:
    """Step ``alpha >= 0`` minimizing ``E(x + alpha d)``.

    Brackets the root of the directional derivative
    ``phi'(alpha) = -force(x + alpha d) . d`` by step doubling, then
    narrows it with Illinois false position (bisection when a probe is
    non-finite) until ``|phi'| <= tol |phi'(0)|``.
    """
    x = as_vector(x)
    d = as_vector(d, x.size, "d")
    dnorm = float(np.linalg.norm(d))
    if dnorm == 0.0:
        raise ValueError("search direction must be nonzero")

    def slope(alpha: float) -> float:
        f = obj.force(x + alpha * d)
        s = -float(np.dot(f, d))
        return s if math.isfinite(s) else math.inf

    s0 = slope(0.0)
    if not math.isfinite(s0):
        raise ObjectiveUndefinedError("objective undefined near x")
    if s0 >= 0.0:
        return 0.0
    target = tol * abs(s0)

    lo, s_lo = 0.0, s0
    hi = 1.0 / max(dnorm, 1.0)
    while True:
        s_hi = slope(hi)
        if abs(s_hi) <= target:
            return hi
        if s_hi > 0.0:
            break
        lo, s_lo = hi, s_hi
        hi *= 2.0
        if hi > alpha_max:
            raise UnboundedDirectionError("direction unbounded")

    side = 0
    for _ in range(400):
        if math.isfinite(s_hi):
            a = hi - s_hi * (hi - lo) / (s_hi - s_lo)
            if not lo < a < hi:
                a = 0.5 * (lo + hi)
        else:
            a = 0.5 * (lo + hi)
        s_a = slope(a)
        if abs(s_a) <= target:
            return a
        if s_a < 0.0:
            lo, s_lo = a, s_a
            if side == -1 and math.isfinite(s_hi):
                s_hi *= 0.5
            side = -1
        else:
            hi, s_hi = a, s_a
            if side == 1:
                s_lo *= 0.5
            side = 1
        if hi - lo <= 4.0 * np.finfo(float).eps * hi:
            break
    return lo if abs(s_lo) <= abs(s_hi) else hi

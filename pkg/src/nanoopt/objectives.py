"""Analytic test objectives: SPD quadratics, Rosenbrock, tilted double well."""
from __future__ import annotations

import numpy as np

from .numcore import Bounds, Objective, as_vector


class Quadratic(Objective):
    """E(x) = 1/2 x^T A x - b^T x."""

    name = "quadratic"

    def __init__(self, A, b):
        A = np.array(A, dtype=float)
        b = as_vector(b, name="b")
        if A.shape != (b.size, b.size):
            raise ValueError(f"A must be {b.size}x{b.size}, got {A.shape}")
        if not np.allclose(A, A.T):
            raise ValueError("A must be symmetric")
        self.A = A
        self.b = b
        self.dimension = b.size
        self.sample_bounds = Bounds((-5.0,) * self.dimension, (5.0,) * self.dimension)

    def energy(self, x):
        return float(0.5 * x @ self.A @ x - self.b @ x)

    def force(self, x):
        return self.b - self.A @ x

    def minimizer(self) -> np.ndarray:
        return np.linalg.solve(self.A, self.b)

    @classmethod
    def reference(cls) -> "Quadratic":
        """The 2-D case A=[[4,1],[1,3]], b=(1,2); minimizer (1/11, 7/11)."""
        return cls([[4.0, 1.0], [1.0, 3.0]], [1.0, 2.0])

    @classmethod
    def random_spd(cls, n: int, rng) -> "Quadratic":
        """A = M M^T + n I with M entries standard normal, b standard normal."""
        M = np.array([[rng.normal() for _ in range(n)] for _ in range(n)])
        b = np.array([rng.normal() for _ in range(n)])
        A = M @ M.T + n * np.eye(n)
        return cls(0.5 * (A + A.T), b)


class Rosenbrock(Objective):
    name = "rosenbrock"
    dimension = 2
    sample_bounds = Bounds((-2.0, -1.0), (2.0, 3.0))

    def __init__(self, a: float = 1.0, b: float = 100.0):
        self.a = a
        self.b = b

    def energy(self, x):
        return float((self.a - x[0]) ** 2 + self.b * (x[1] - x[0] ** 2) ** 2)

    def force(self, x):
        g0 = -2.0 * (self.a - x[0]) - 4.0 * self.b * x[0] * (x[1] - x[0] ** 2)
        g1 = 2.0 * self.b * (x[1] - x[0] ** 2)
        return -np.array([g0, g1])


class TiltedDoubleWell(Objective):
    """E(x) = (x^2 - 1)^2 + tilt * x; for tilt > 0 the global basin is x < 0."""

    name = "doublewell"
    dimension = 1
    sample_bounds = Bounds((-2.0,), (2.0,))

    def __init__(self, tilt: float = 0.3):
        self.tilt = tilt

    def energy(self, x):
        return float((x[0] ** 2 - 1.0) ** 2 + self.tilt * x[0])

    def force(self, x):
        return -np.array([4.0 * x[0] * (x[0] ** 2 - 1.0) + self.tilt])

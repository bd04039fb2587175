"""Exception types raised across the toolkit."""
from __future__ import annotations

import numpy as np


class DimensionError(ValueError):
    pass


class ObjectiveUndefinedError(ValueError):
    """Energy is not finite at a probe point."""


class UnboundedDirectionError(ValueError):
    pass


class NonFiniteEnergyError(FloatingPointError):
    """An optimizer hit a non-finite energy; ``last_valid`` is the last good iterate."""

    def __init__(self, message: str, last_valid: np.ndarray | None = None, iteration: int = 0):
        super().__init__(message)
        self.last_valid = last_valid
        self.iteration = iteration


class DerivativeVanishedError(ZeroDivisionError):
    def __init__(self, message: str, x: float):
        super().__init__(message)
        self.x = x


class NewtonNotConvergedError(RuntimeError):
    def __init__(self, message: str, best: float):
        super().__init__(message)
        self.best = best


class CutoffNotFoundError(RuntimeError):
    pass


class OracleCapError(ValueError):
    pass


class GeometryError(ValueError):
    pass


class ConfigError(ValueError):
    """Invalid campaign configuration (CLI exit code 2)."""

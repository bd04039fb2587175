"""Local optimizers: steepest descent, damped Newtonian dynamics, CG, BFGS, 1-D Newton."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DerivativeVanishedError, NewtonNotConvergedError, NonFiniteEnergyError
from .numcore import Objective, OptimizerReport, Termination, as_vector, line_minimize

MAX_HALVINGS = 60
ARMIJO_C = 1e-4
# energy rise accepted as round-off in CG/BFGS (relative to 1 + |E|)
ENERGY_NOISE = 1e-12
# longest BFGS step taken while the inverse curvature is still the identity
IDENTITY_STEP_CAP = 1.0


def _noise(e: float) -> float:
    return ENERGY_NOISE * (1.0 + abs(e))


@dataclass(frozen=True)
class LocalOptConfig:
    lam: float = 0.01
    mu: float = 0.5
    max_iter: int = 10000
    grad_tol: float = 1e-8
    use_backtracking: bool = True
    record_path: bool = False

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lam must be > 0")
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError("mu must lie in [0, 1]")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be > 0")


class _Run:
    """Bookkeeping shared by the iterative methods: trajectory, best point, path.

    Descent methods report their last iterate; ``best_ever`` keeps the lowest
    energy seen instead (for non-monotone dynamics), except that a converged
    run always reports the iterate that passed the gradient test.
    """

    def __init__(self, obj: Objective, x0, cfg: LocalOptConfig, best_ever: bool = False):
        self.obj = obj
        self.cfg = cfg
        self.best_ever = best_ever
        x = as_vector(x0, obj.dimension, "x0")
        e, f = obj.energy_and_force(x)
        if not math.isfinite(e) or not np.all(np.isfinite(f)):
            raise NonFiniteEnergyError("non-finite energy at starting point", x, 0)
        self.x, self.e, self.f = x, float(e), f
        self.best_x, self.best_e = x.copy(), float(e)
        self.trajectory = [(0, float(e))]
        self.path = [x.copy()] if cfg.record_path else None

    def evaluate(self, x, it: int) -> tuple[float, np.ndarray]:
        e, f = self.obj.energy_and_force(x)
        if not math.isfinite(e) or not np.all(np.isfinite(f)):
            raise NonFiniteEnergyError(f"non-finite energy at iteration {it}", self.x.copy(), it)
        return float(e), f

    def accept(self, x, e, f, it: int) -> None:
        self.x, self.e, self.f = x, e, f
        self.trajectory.append((it, e))
        if self.path is not None:
            self.path.append(x.copy())
        if not self.best_ever or e < self.best_e:
            self.best_x, self.best_e = x.copy(), e

    def converged(self) -> bool:
        return float(np.linalg.norm(self.f)) <= self.cfg.grad_tol

    def report(self, iterations: int, termination: Termination) -> OptimizerReport:
        if termination is Termination.CONVERGED:
            self.best_x, self.best_e = self.x.copy(), self.e
        return OptimizerReport(
            best_point=self.best_x,
            best_value=self.best_e,
            iterations=iterations,
            termination=termination,
            trajectory=self.trajectory,
            path=self.path,
        )


def _backtrack(obj: Objective, x, e, direction, step: float, slope: float = 0.0, slack: float = 0.0):
    """Halve ``step`` until ``E(x + step * direction) <= e + ARMIJO_C * step * slope + slack``.

    ``slope`` is the directional derivative; with ``slope == slack == 0`` the
    test is a strict decrease, so a step that lands on an equal-energy point is halved.
    Returns ``(x_new, e_new)`` or ``None`` once MAX_HALVINGS is exhausted.
    """
    for _ in range(MAX_HALVINGS + 1):
        xn = x + step * direction
        en = obj.energy(xn)
        bound = e + ARMIJO_C * step * slope + slack
        if math.isfinite(en) and (en < bound or (en == bound and (slope or slack))):
            return xn, float(en)
        step *= 0.5
    return None


def _sdm_step(obj: Objective, x, e, f, lam: float):
    """Halve ``lam`` until the step along ``f`` lowers the energy.

    A step whose energy lies within round-off of ``e`` is accepted only while
    the new force still has a positive component along ``f`` (the line minimum
    has not been overshot). Returns ``(x, e, f)`` or ``None`` when stalled.
    """
    for _ in range(MAX_HALVINGS + 1):
        xn = x + lam * f
        en, fn = obj.energy_and_force(xn)
        if math.isfinite(en):
            if en < e - _noise(e):
                return xn, float(en), fn
            if en <= e + _noise(e) and np.all(np.isfinite(fn)) and float(fn @ f) > 0.0:
                return xn, float(en), fn
        lam *= 0.5
    return None


def steepest_descent(obj: Objective, x0, cfg: LocalOptConfig | None = None) -> OptimizerReport:
    """Step along the force, x <- x + lam * f(x).

    With ``use_backtracking`` the step is halved within an iteration until the
    energy decreases (up to round-off, see ``_sdm_step``). Without it the
    iteration may oscillate and the best-ever point is reported.
    """
    cfg = cfg or LocalOptConfig()
    run = _Run(obj, x0, cfg, best_ever=not cfg.use_backtracking)
    for it in range(cfg.max_iter):
        if run.converged():
            return run.report(it, Termination.CONVERGED)
        if cfg.use_backtracking:
            step = _sdm_step(obj, run.x, run.e, run.f, cfg.lam)
            if step is None:
                return run.report(it, Termination.STALLED)
            xn = step[0]
        else:
            xn = run.x + cfg.lam * run.f
        en, fn = run.evaluate(xn, it + 1)
        run.accept(xn, en, fn, it + 1)
    term = Termination.CONVERGED if run.converged() else Termination.MAX_ITER
    return run.report(cfg.max_iter, term)


def damped_newtonian(obj: Objective, x0, cfg: LocalOptConfig | None = None) -> OptimizerReport:
    """Two-step damped dynamics.

    x(i+1) = [2 x(i) + lam f(x(i)) - x(i-1) (1 - mu)] / (1 + mu), started with
    x(-1) = x(0). Not monotone in general; best-ever point is reported.
    """
    cfg = cfg or LocalOptConfig()
    run = _Run(obj, x0, cfg, best_ever=True)
    x_prev = run.x.copy()
    for it in range(cfg.max_iter):
        if run.converged():
            return run.report(it, Termination.CONVERGED)
        xn = (2.0 * run.x + cfg.lam * run.f - x_prev * (1.0 - cfg.mu)) / (1.0 + cfg.mu)
        en, fn = run.evaluate(xn, it + 1)
        x_prev = run.x
        run.accept(xn, en, fn, it + 1)
    term = Termination.CONVERGED if run.converged() else Termination.MAX_ITER
    return run.report(cfg.max_iter, term)


def conjugate_gradient(obj: Objective, x0, cfg: LocalOptConfig | None = None) -> OptimizerReport:
    """Nonlinear CG, Polak-Ribiere with beta = max(beta, 0).

    Each iteration is one exact line minimization; the direction is reset to
    the force every ``n`` iterations. Energy may rise by round-off
    (``ENERGY_NOISE``) between iterates. ``iterations`` in the report counts line
    minimizations.
    """
    cfg = cfg or LocalOptConfig()
    run = _Run(obj, x0, cfg)
    n = obj.dimension
    d = run.f.copy()
    since_restart = 0
    for it in range(cfg.max_iter):
        if run.converged():
            return run.report(it, Termination.CONVERGED)
        alpha = line_minimize(obj, run.x, d)
        xn = run.x + alpha * d
        en = obj.energy(xn)
        if alpha == 0.0 or not math.isfinite(en) or en > run.e + _noise(run.e):
            # line search failed to descend: fall back to a backtracked force step
            step = _backtrack(obj, run.x, run.e, run.f, cfg.lam)
            if step is None:
                return run.report(it, Termination.STALLED)
            xn = step[0]
            d_restart = True
        else:
            d_restart = False
        en, fn = run.evaluate(xn, it + 1)
        f_old = run.f
        run.accept(xn, en, fn, it + 1)
        since_restart += 1
        if d_restart or since_restart >= n:
            d = fn.copy()
            since_restart = 0
            continue
        beta = max(0.0, float(fn @ (fn - f_old)) / float(f_old @ f_old))
        d = fn + beta * d
        if float(d @ fn) <= 0.0:
            d = fn.copy()
            since_restart = 0
    term = Termination.CONVERGED if run.converged() else Termination.MAX_ITER
    return run.report(cfg.max_iter, term)


def quasi_newton(obj: Objective, x0, cfg: LocalOptConfig | None = None) -> OptimizerReport:
    """BFGS on the inverse curvature, identity start, Armijo backtracking.

    While H is the identity (first step, or after a reset) the step length is
    capped at ``IDENTITY_STEP_CAP`` so a large initial force cannot fling
    coordinates away; H is rescaled by s.y / y.y before its first update.
    Updates are skipped when the curvature condition s.y > 0 fails. The
    Armijo test tolerates a round-off rise of ``ENERGY_NOISE``.
    """
    cfg = cfg or LocalOptConfig()
    run = _Run(obj, x0, cfg)
    n = obj.dimension
    eye = np.eye(n)
    H = eye.copy()
    fresh = True
    for it in range(cfg.max_iter):
        if run.converged():
            return run.report(it, Termination.CONVERGED)
        g = -run.f
        p = -H @ g
        slope = float(p @ g)
        if slope >= 0.0:
            H = eye.copy()
            fresh = True
            p = run.f.copy()
            slope = float(p @ g)
        step0 = 1.0
        if fresh:
            step0 = min(1.0, IDENTITY_STEP_CAP / float(np.linalg.norm(p)))
        step = _backtrack(obj, run.x, run.e, p, step0, slope, _noise(run.e))
        if step is None:
            return run.report(it, Termination.STALLED)
        xn = step[0]
        en, fn = run.evaluate(xn, it + 1)
        s = xn - run.x
        y = run.f - fn
        sy = float(s @ y)
        if sy > 1e-12 * float(np.linalg.norm(s) * np.linalg.norm(y)):
            if fresh:
                H = (sy / float(y @ y)) * eye
                fresh = False
            rho = 1.0 / sy
            V = eye - rho * np.outer(s, y)
            H = V @ H @ V.T + rho * np.outer(s, s)
        run.accept(xn, en, fn, it + 1)
    term = Termination.CONVERGED if run.converged() else Termination.MAX_ITER
    return run.report(cfg.max_iter, term)


def newton_1d(
    f: Callable[[float], float],
    fprime: Callable[[float], float],
    x0: float,
    tol: float = 1e-12,
    max_iter: int = 100,
) -> float:
    """Root of ``f`` by x <- x - f(x) / f'(x); returns x with |f(x)| <= tol."""
    x = float(x0)
    best, best_f = x, math.inf
    for _ in range(max_iter):
        fx = f(x)
        if abs(fx) < best_f:
            best, best_f = x, abs(fx)
        if abs(fx) <= tol:
            return x
        dfx = fprime(x)
        if abs(dfx) < 1e-300:
            raise DerivativeVanishedError("derivative vanished", x)
        x = x - fx / dfx
    fx = f(x)
    if abs(fx) < best_f:
        best = x
    if abs(fx) <= tol:
        return x
    raise NewtonNotConvergedError(f"no root within {max_iter} iterations", best)


METHODS = {
    "sdm": steepest_descent,
    "damped": damped_newtonian,
    "cg": conjugate_gradient,
    "bfgs": quasi_newton,
}

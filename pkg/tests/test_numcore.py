from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nanoopt.errors import DimensionError, ObjectiveUndefinedError, UnboundedDirectionError
from nanoopt.ljcluster import LJObjective, seed_geometry
from nanoopt.numcore import Bounds, Objective, as_vector, finite_diff_gradient, line_minimize, same_dim
from nanoopt.objectives import Quadratic, Rosenbrock, TiltedDoubleWell
from nanoopt.rng import RngStream


class Square(Objective):
    dimension = 1

    def energy(self, x):
        return float(x[0] ** 2)

    def force(self, x):
        return -2.0 * x


class Constant(Objective):
    def __init__(self, n):
        self.dimension = n

    def energy(self, x):
        return 3.5

    def force(self, x):
        return np.zeros(self.dimension)


class LinearDown(Objective):
    dimension = 1

    def energy(self, x):
        return float(-x[0])

    def force(self, x):
        return np.array([1.0])


class Hole(Objective):
    dimension = 1

    def energy(self, x):
        return float("nan") if abs(x[0]) < 0.1 else float(x[0])

    def force(self, x):
        return np.array([-1.0])


def test_as_vector_rules():
    assert as_vector(3.0).shape == (1,)
    with pytest.raises(DimensionError):
        as_vector([1.0, 2.0], dim=3)
    with pytest.raises(ValueError):
        as_vector([1.0, np.nan])
    with pytest.raises(ValueError):
        as_vector([np.inf])
    with pytest.raises(DimensionError):
        as_vector([[1.0, 2.0]])
    with pytest.raises(DimensionError):
        same_dim(np.zeros(2), np.zeros(3))


def test_bounds_validation():
    with pytest.raises(ValueError):
        Bounds((1.0,), (1.0,))
    with pytest.raises(DimensionError):
        Bounds((0.0, 0.0), (1.0,))
    b = Bounds.from_pairs([(0, 1), (-2, 2)])
    assert b.dimension == 2
    assert b.contains([0.5, 2.0]) and not b.contains([0.5, 2.1])
    x = b.sample(RngStream(0))
    assert b.contains(x)


def test_fd_square():
    g = finite_diff_gradient(Square(), [3.0], 1e-5)
    assert g[0] == pytest.approx(6.0, abs=1e-8)


def test_fd_constant_is_zero():
    assert np.all(finite_diff_gradient(Constant(4), [1.0, -2.0, 0.0, 7.0]) == 0.0)


def test_fd_lj_dimer_minimum():
    r = 2 ** (1 / 6)
    g = finite_diff_gradient(LJObjective(2), [0, 0, 0, r, 0, 0])
    assert np.linalg.norm(g) <= 1e-6


def test_fd_undefined_objective():
    with pytest.raises(ObjectiveUndefinedError, match="objective undefined near x"):
        finite_diff_gradient(Hole(), [0.0], 1e-2)
    with pytest.raises(ValueError):
        finite_diff_gradient(Square(), [1.0], 0.0)


def _shipped_objectives():
    return [Quadratic.reference(), Quadratic.random_spd(6, RngStream(4)), Rosenbrock(),
            TiltedDoubleWell(), LJObjective(2), LJObjective(5)]


@pytest.mark.parametrize("obj", _shipped_objectives(), ids=lambda o: f"{o.name}{o.dimension}")
def test_force_matches_fd_on_random_points(obj):
    rng = RngStream(2024)
    for _ in range(100):
        if isinstance(obj, LJObjective):
            x = seed_geometry(obj.n_atoms, rng).coordinates
        else:
            x = obj.sample_bounds.sample(rng)
        f = obj.force(x)
        g = finite_diff_gradient(obj, x, 1e-6 * (1 + np.abs(x)))
        assert np.linalg.norm(f + g) <= 1e-4 * (1 + np.linalg.norm(f))


def test_line_minimize_1d_quadratic():
    assert line_minimize(Square(), [4.0], [-1.0]) == pytest.approx(4.0, rel=1e-10)


def test_line_minimize_2d_quadratic_closed_form():
    # alpha* = b.b / b.Ab computed in exact rationals
    A = [[Fraction(4), Fraction(1)], [Fraction(1), Fraction(3)]]
    b = [Fraction(1), Fraction(2)]
    Ab = [sum(A[i][j] * b[j] for j in range(2)) for i in range(2)]
    expected = sum(v * v for v in b) / sum(b[i] * Ab[i] for i in range(2))
    assert expected == Fraction(1, 4)
    alpha = line_minimize(Quadratic.reference(), [0.0, 0.0], [1.0, 2.0])
    assert alpha == pytest.approx(float(expected), rel=1e-10)


def test_line_minimize_already_minimal_along_direction():
    q = Quadratic([[2.0, 0.0], [0.0, 8.0]], [0.0, 0.0])
    # at (0, 1) the gradient is (0, 8); direction (1, 0) is orthogonal
    assert line_minimize(q, [0.0, 1.0], [1.0, 0.0]) == pytest.approx(0.0, abs=1e-12)


def test_line_minimize_slope_condition():
    q = Quadratic.random_spd(5, RngStream(1))
    x = np.ones(5)
    d = q.force(x)
    a = line_minimize(q, x, d)
    s0 = abs(q.force(x) @ d)
    assert abs(q.force(x + a * d) @ d) <= 1e-10 * s0 * 10


def test_line_minimize_unbounded():
    with pytest.raises(UnboundedDirectionError, match="direction unbounded"):
        line_minimize(LinearDown(), [0.0], [1.0])
    with pytest.raises(ValueError):
        line_minimize(Square(), [1.0], [0.0])


@settings(max_examples=200, deadline=None)
@given(
    curvature=st.floats(1e-3, 1e3),
    center=st.floats(-100, 100),
    x=st.floats(-100, 100),
)
def test_line_minimize_convex_1d_exact(curvature, center, x):
    q = Quadratic([[curvature]], [curvature * center])
    if abs(x - center) < 1e-6:
        return
    d = np.sign(center - x)
    alpha = line_minimize(q, [x], [d])
    assert alpha == pytest.approx(abs(center - x), rel=1e-8)

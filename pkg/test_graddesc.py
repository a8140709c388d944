#!/usr/bin/env python3
"""Tests for the continuous gradient-descent minimizer."""

import math
import numpy as np
import pytest

from py_dtsp.config import DescentConfig
from py_dtsp.exceptions import InvalidArgumentError, NumericalFailureError
from py_dtsp.solvers.graddesc import (
    SHIPPED_FIELDS, ScalarField, cubic_field, descend_step, finite_difference_gradient, linear_field, minimize,
    quadratic_field, rosenbrock_field, sphere_field, stop_by_gradient,
)


def test_descend_step():
    np.testing.assert_allclose(descend_step([1.0, 2.0], [0.5, -1.0], 0.4), [0.8, 2.4])
    np.testing.assert_array_equal(descend_step([1.0], [3.0], 0.0), [1.0])

    with pytest.raises(InvalidArgumentError):
        descend_step([1.0, 2.0], [1.0], 0.1)
    with pytest.raises(InvalidArgumentError):
        descend_step([1.0], [1.0], -0.1)


def test_stop_by_gradient():
    assert stop_by_gradient([1e-7, -1e-7], 1e-6)
    assert not stop_by_gradient([1e-7, 2e-6], 1e-6)
    with pytest.raises(InvalidArgumentError):
        stop_by_gradient([0.0], 0.0)


def test_quadratic_oracle():
    """f(x) = (x - 3)^2 from x0 = 0 with t = 0.4 contracts by 0.2 per step."""
    cfg = DescentConfig(step_mode="fixed", t=0.4, epsilon=1e-4, restarts=0, init_box=[(0.0, 0.0)])
    result = minimize(quadratic_field(1.0, 3.0), cfg, seed=0)

    assert result.converged
    assert result.iterations_used <= 8
    assert abs(result.best_x[0] - 3.0) < 1e-4
    assert abs(result.best_x[0] - 3.0) == pytest.approx(3 * 0.2 ** result.iterations_used, rel=1e-9)


def test_quadratic_from_the_optimum():
    cfg = DescentConfig(restarts=0, init_box=[(3.0, 3.0)])
    result = minimize(quadratic_field(1.0, 3.0), cfg, seed=0)
    assert result.converged
    assert result.iterations_used == 1
    assert result.best_f == 0.0


def test_linear_field_hits_iteration_cap():
    cfg = DescentConfig(max_iters=25, restarts=0)
    result = minimize(linear_field([1.0, -2.0]), cfg, seed=1)
    assert not result.converged
    assert result.iterations_used == 25


def test_cubic_divergence_is_reported():
    # From x0 in [-5, -1] the cubic runs off to -inf
    cfg = DescentConfig(t=0.4, restarts=0, init_box=[(-5.0, -1.0)], max_iters=1000)
    result = minimize(cubic_field(), cfg, seed=0)
    outcome = result.restarts[0]
    assert outcome.diverged
    assert not result.converged
    assert math.isfinite(result.best_f)


def test_decreasing_step_mode():
    cfg = DescentConfig(step_mode="decreasing", t=1.0, epsilon=1e-8, restarts=0, init_box=[(0.0, 0.0)])
    result = minimize(quadratic_field(0.5, 3.0), cfg, seed=0)
    # first step t/1 = 1 lands exactly on the minimum of 0.5 (x - 3)^2
    assert result.best_x[0] == pytest.approx(3.0)
    assert result.converged


def test_step_scalar_defaults_follow_step_mode():
    assert DescentConfig().t == 0.4
    assert DescentConfig(step_mode="decreasing").t == 1.0
    assert DescentConfig(step_mode="decreasing", t=0.25).t == 0.25

    harmonic = DescentConfig(step_mode="decreasing", epsilon=1e-8, restarts=0, init_box=[(0.0, 0.0)])
    result = minimize(quadratic_field(0.5, 3.0), harmonic, seed=0)
    assert result.best_x[0] == pytest.approx(3.0)


def test_restarts_never_hurt():
    field = rosenbrock_field()
    single = minimize(field, DescentConfig(t=0.0005, max_iters=2000, restarts=0, init_box=[(-2.0, 2.0)]), seed=5)
    several = minimize(field, DescentConfig(t=0.0005, max_iters=2000, restarts=4, init_box=[(-2.0, 2.0)]), seed=5)

    assert len(several.restarts) == 5
    assert several.best_f <= single.best_f
    assert several.best_f <= min(o.final_f for o in several.restarts)


def test_minimize_is_seeded():
    cfg = DescentConfig(restarts=3)
    a = minimize(sphere_field(3), cfg, seed=7)
    b = minimize(sphere_field(3), cfg, seed=7)
    np.testing.assert_array_equal(a.best_x, b.best_x)
    assert a.best_f == b.best_f


def test_init_box_must_match_dimension():
    cfg = DescentConfig(init_box=[(-1.0, 1.0), (-1.0, 1.0)])
    with pytest.raises(InvalidArgumentError):
        minimize(sphere_field(3), cfg, seed=0)

    with pytest.raises(ValueError):
        DescentConfig(init_box=[(1.0, -1.0)])


def test_non_finite_gradient_raises():
    field = ScalarField(dim=1, eval=lambda x: float(x[0] ** 2), grad=lambda x: np.array([math.nan]), name="broken")
    with pytest.raises(NumericalFailureError) as info:
        minimize(field, DescentConfig(restarts=0), seed=0)
    assert info.value.point is not None


@pytest.mark.parametrize("name", sorted(SHIPPED_FIELDS))
def test_analytic_gradients_match_finite_differences(name):
    field = SHIPPED_FIELDS[name]()
    rng = np.random.default_rng(2024)
    for _ in range(100):
        x = rng.uniform(-2.0, 2.0, field.dim)
        fd = finite_difference_gradient(field, x)
        assert np.max(np.abs(field.grad(x) - fd)) <= 1e-4

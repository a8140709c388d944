#!/usr/bin/env python3
"""Tests for 2-opt moves and steepest-descent tour improvement."""

import itertools
import math
import numpy as np
import pytest

from py_dtsp.data import City, Instance, generate_random_instance, make_tour, tour_length
from py_dtsp.exceptions import InvalidArgumentError
from py_dtsp.solvers import ReconnectMove, apply_2opt_move, best_reconnection, steepest_descent_improve
from py_dtsp.solvers.localsearch import _delta_matrix, move_delta


def is_two_opt_minimal(inst, tour) -> bool:
    """Every move (i, j) applied by brute force yields a tour no shorter than tour."""
    n = len(tour.order)
    for i, j in itertools.combinations(range(n), 2):
        order = tour.order[:i + 1] + tour.order[i + 1:j + 1][::-1] + tour.order[j + 1:]
        if make_tour(inst, order).length < tour.length - 1e-9:
            return False
    return True


def test_uncrossing_move(unit_square, crossed_square):
    move = move_delta(unit_square, crossed_square, 0, 2)
    assert move.delta == pytest.approx(4.0 - (2 + 2 * math.sqrt(2)))

    uncrossed = apply_2opt_move(crossed_square, move, unit_square)
    assert uncrossed.order == (0, 1, 2, 3)
    assert uncrossed.length == pytest.approx(4.0)


def test_identity_moves(unit_square):
    tour = make_tour(unit_square, (0, 1, 2, 3))

    single = move_delta(unit_square, tour, 1, 2)
    assert single.delta == pytest.approx(0.0)
    assert apply_2opt_move(tour, single, unit_square).order == tour.order

    full = move_delta(unit_square, tour, 0, 3)
    assert full.delta == pytest.approx(0.0)
    reversed_tour = apply_2opt_move(tour, full, unit_square)
    assert reversed_tour.order == (0, 3, 2, 1)
    assert reversed_tour.length == pytest.approx(tour.length)


def test_apply_move_rejects_bad_moves(unit_square, crossed_square):
    with pytest.raises(InvalidArgumentError):
        apply_2opt_move(crossed_square, ReconnectMove(2, 1, 0.0), unit_square)
    with pytest.raises(InvalidArgumentError):
        apply_2opt_move(crossed_square, ReconnectMove(0, 4, 0.0), unit_square)
    with pytest.raises(InvalidArgumentError, match="stale"):
        apply_2opt_move(crossed_square, ReconnectMove(0, 2, -5.0), unit_square)


def test_best_reconnection(unit_square, crossed_square):
    move = best_reconnection(unit_square, crossed_square)
    assert (move.i, move.j) == (0, 2)
    assert move.delta == pytest.approx(-0.8284271247, abs=1e-9)

    assert best_reconnection(unit_square, make_tour(unit_square, (0, 1, 2, 3))) is None

    triangle = Instance.from_cities([City(0, 0, 0), City(1, 1, 0), City(2, 0, 1)])
    assert best_reconnection(triangle, make_tour(triangle, (0, 1, 2))) is None


def test_steepest_descent_on_crossed_square(unit_square, crossed_square):
    improved = steepest_descent_improve(unit_square, crossed_square)
    assert improved.length == 4.0
    assert improved.order == (0, 1, 2, 3)


def test_steepest_descent_fixpoint(unit_square):
    tour = make_tour(unit_square, (0, 1, 2, 3))
    assert steepest_descent_improve(unit_square, tour) is tour


def test_steepest_descent_random_instance():
    inst = generate_random_instance(8, seed=13)
    rng = np.random.default_rng(13)
    start = make_tour(inst, rng.permutation(8).tolist())

    improved = steepest_descent_improve(inst, start)
    assert improved.length <= start.length
    assert improved.length == pytest.approx(make_tour(inst, improved.order).length, rel=1e-9)
    assert is_two_opt_minimal(inst, improved)


def test_steepest_descent_round_cap():
    inst = generate_random_instance(10, seed=2)
    start = make_tour(inst, list(range(10)))
    capped = steepest_descent_improve(inst, start, max_rounds=1)
    move = best_reconnection(inst, start)
    if move is not None:
        assert capped.length == pytest.approx(start.length + move.delta)


@pytest.mark.parametrize("n", [4, 5])
def test_small_instances_exhaustively(n):
    """Every start tour on 20 seeded instances ends 2-opt minimal and no longer."""
    for seed in range(20):
        inst = generate_random_instance(n, seed=seed)
        for rest in itertools.permutations(range(1, n)):
            start = make_tour(inst, (0,) + rest)
            improved = steepest_descent_improve(inst, start)
            assert improved.length <= start.length + 1e-12
            assert is_two_opt_minimal(inst, improved)


@pytest.mark.parametrize("n", [6, 9])
def test_move_deltas_match_full_recomputation(n):
    """Incremental deltas of every move agree with recomputing the tour length."""
    for seed in range(5):
        inst = generate_random_instance(n, seed=seed)
        rng = np.random.default_rng(seed)
        tour = make_tour(inst, rng.permutation(n).tolist())
        matrix = _delta_matrix(inst.dist, inst.positions(tour.order))

        for i, j in itertools.combinations(range(n), 2):
            move = move_delta(inst, tour, i, j)
            order = tour.order[:i + 1] + tour.order[i + 1:j + 1][::-1] + tour.order[j + 1:]
            expected = tour_length(inst, order) - tour.length
            assert move.delta == pytest.approx(expected, abs=1e-9)
            assert matrix[i, j] == pytest.approx(expected, abs=1e-9)
            assert apply_2opt_move(tour, move, inst).length == pytest.approx(tour_length(inst, order), abs=1e-9)

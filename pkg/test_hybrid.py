#!/usr/bin/env python3
"""Tests for the gradient-reinforced colony and dynamic pheromone handling."""

import numpy as np
import pytest

from py_dtsp.config import AcoParams, HybridParams
from py_dtsp.data import (
    City, DynamicEvent, EventSchedule, Instance, generate_random_instance, make_tour, tour_length,
)
from py_dtsp.exceptions import EventApplicationError, InvalidArgumentError
from py_dtsp.solvers import (
    GradientTermState, deposit, detect_stagnation, evaporate, gradient_reinforcement, handle_dynamic_event,
    hybrid_pheromone_update, init_pheromone, reinit_pheromone, run_aco, run_hybrid, transition_probabilities,
)
from py_dtsp.solvers.ants import AntState
from py_dtsp.solvers.pheromone import PheromoneMatrix


def test_gradient_reinforcement_improvement():
    state = gradient_reinforcement(GradientTermState(x=0.0, prev_best_length=400.0, x_max=10.0), 360.0, 0.4)
    assert state.x == pytest.approx(0.04)
    assert state.prev_best_length == 360.0


def test_gradient_reinforcement_first_call_and_plateau():
    first = gradient_reinforcement(GradientTermState(x_max=10.0), 500.0, 0.4)
    assert first.x == 0.0
    assert first.prev_best_length == 500.0

    plateau = gradient_reinforcement(GradientTermState(x=0.07, prev_best_length=300.0, x_max=10.0), 300.0, 0.4)
    assert plateau.x == 0.07


def test_gradient_reinforcement_clamps():
    worse = gradient_reinforcement(GradientTermState(x=0.05, prev_best_length=300.0, x_max=10.0), 600.0, 0.4)
    assert worse.x == 0.0

    capped = gradient_reinforcement(GradientTermState(x=0.9, prev_best_length=1000.0, x_max=1.0), 10.0, 0.4)
    assert capped.x == 1.0


def test_gradient_reinforcement_rejects_bad_input():
    with pytest.raises(InvalidArgumentError):
        gradient_reinforcement(GradientTermState(), 0.0, 0.4)
    with pytest.raises(InvalidArgumentError):
        gradient_reinforcement(GradientTermState(), 10.0, -0.1)


def _square_of_perimeter_100():
    inst = Instance.from_cities([City(0, 0, 0), City(1, 25, 0), City(2, 25, 25), City(3, 0, 25)])
    return inst, make_tour(inst, (0, 1, 2, 3))


def test_hybrid_update_arithmetic():
    inst, tour = _square_of_perimeter_100()
    ph = init_pheromone(4, tau0=1.0, tau_max=10.0)
    params = HybridParams(aco=AcoParams(rho=0.1, q=100.0))

    updated = hybrid_pheromone_update(ph, [tour], tour, params, GradientTermState(x=0.04, x_max=1.0))
    assert updated.edge(0, 1) == pytest.approx(1.94)
    assert updated.edge(3, 0) == pytest.approx(1.94)
    # diagonals are not on the tour
    assert updated.edge(0, 2) == pytest.approx(0.9)


def test_hybrid_update_hits_ceiling():
    inst, tour = _square_of_perimeter_100()
    ph = init_pheromone(4, tau0=1.9, tau_max=2.0)
    params = HybridParams(aco=AcoParams(rho=0.1, q=100.0), tau_max=2.0)

    updated = hybrid_pheromone_update(ph, [tour], tour, params, GradientTermState(x=0.1, x_max=1.0))
    assert updated.edge(1, 2) == 2.0


def test_hybrid_update_without_reinforcement_is_ant_system():
    inst = generate_random_instance(9, seed=17)
    rng = np.random.default_rng(17)
    params = HybridParams(aco=AcoParams(rho=0.2, q=50.0))

    for _ in range(100):
        tau = rng.uniform(0.01, 3.0, (9, 9))
        ph = PheromoneMatrix(tau=(tau + tau.T) / 2, tau_min=1e-3, tau_max=5.0, ids=inst.ids)
        tours = [make_tour(inst, rng.permutation(9).tolist()) for _ in range(3)]
        best = min(tours, key=lambda t: t.length)

        hybrid = hybrid_pheromone_update(ph, tours, best, params, GradientTermState(x=0.0))
        baseline = deposit(evaporate(ph, 0.2), tours, 50.0)
        np.testing.assert_allclose(hybrid.tau, baseline.tau, rtol=0, atol=1e-12)


def test_detect_stagnation():
    assert detect_stagnation([350.0, 350.0, 350.0], 3)
    assert not detect_stagnation([350.0, 349.99, 350.0], 3)
    assert not detect_stagnation([350.0, 350.0], 3)
    assert detect_stagnation([400.0, 350.0, 350.0, 350.0], 3)
    with pytest.raises(InvalidArgumentError):
        detect_stagnation([1.0, 1.0], 1)


def test_reinit_pheromone(unit_square):
    ph = PheromoneMatrix(
        tau=np.array([[0, 5, 1, 2], [5, 0, 3, 1], [1, 3, 0, 4], [2, 1, 4, 0]], dtype=float),
        tau_min=0.01, tau_max=10.0, ids=unit_square.ids,
    )
    state = GradientTermState(x=0.3, prev_best_length=4.2, x_max=1.0)

    reset, reset_state = reinit_pheromone(ph, 0.5, state)
    assert np.all(reset.off_diagonal() == 0.5)
    assert reset_state.x == 0.0
    assert reset_state.prev_best_length == 4.2

    again, _ = reinit_pheromone(reset, 0.5, reset_state)
    assert np.array_equal(again.tau, reset.tau)

    # uniform pheromone cancels: choice depends on distances only
    p = transition_probabilities(unit_square, reset, AntState.at(0), AcoParams(alpha=1, beta=1))
    d = unit_square.dist[0, 1:]
    expected = (1 / d) / (1 / d).sum()
    assert [p[1], p[2], p[3]] == pytest.approx(list(expected))


def _entropy(p):
    values = np.array([v for v in p.values() if v > 0])
    return float(-(values * np.log(values)).sum())


@pytest.mark.parametrize("alpha", [0.5, 1.0, 3.0])
def test_choice_entropy_is_maximal_after_reinit(alpha):
    inst = generate_random_instance(8, seed=5)
    rng = np.random.default_rng(5)
    # beta = 0 isolates the pheromone term of the choice rule
    params = AcoParams(alpha=alpha, beta=0.0)
    start = init_pheromone(8, tau0=1.0, tau_max=10.0, tau_min=0.01, ids=inst.ids)
    worn = deposit(evaporate(start, 0.3), [make_tour(inst, rng.permutation(8).tolist())], q=500.0)
    reset, _ = reinit_pheromone(worn, 1.0, GradientTermState(x=0.2, prev_best_length=300.0))

    for city in inst.ids:
        ant = AntState.at(city)
        reset_entropy = _entropy(transition_probabilities(inst, reset, ant, params))
        assert reset_entropy == pytest.approx(np.log(7), abs=1e-12)
        assert reset_entropy > _entropy(transition_probabilities(inst, worn, ant, params))

        for _ in range(50):
            tau = rng.uniform(0.01, 10.0, (8, 8))
            random_ph = worn.with_tau((tau + tau.T) / 2)
            assert reset_entropy >= _entropy(transition_probabilities(inst, random_ph, ant, params)) - 1e-12


def test_handle_insert_keeps_old_block(unit_square):
    ph = PheromoneMatrix(tau=np.arange(16, dtype=float).reshape(4, 4) + 1.0, tau_min=0.01, tau_max=100.0,
                         ids=unit_square.ids)
    ph = ph.with_tau((ph.tau + ph.tau.T) / 2)

    new_ph, inst = handle_dynamic_event(ph, unit_square, DynamicEvent.insert(3, City(4, 0.5, 0.5)), tau0=0.7)
    assert new_ph.tau.shape == (5, 5)
    assert new_ph.ids == inst.ids == (0, 1, 2, 3, 4)
    assert np.array_equal(new_ph.tau[:4, :4], ph.tau)
    assert np.all(new_ph.tau[4, :4] == 0.7)
    assert new_ph.tau[4, 4] == 0.0


def test_handle_remove_and_move(unit_square):
    tau = np.array([[0, 5, 1, 2], [5, 0, 3, 1], [1, 3, 0, 4], [2, 1, 4, 0]], dtype=float)
    ph = PheromoneMatrix(tau=tau, tau_min=0.01, tau_max=10.0, ids=unit_square.ids)

    removed_ph, removed = handle_dynamic_event(ph, unit_square, DynamicEvent.remove(2, 1), tau0=0.5)
    assert removed.ids == (0, 2, 3)
    keep = [0, 2, 3]
    assert np.array_equal(removed_ph.tau, tau[np.ix_(keep, keep)])

    moved_ph, moved = handle_dynamic_event(ph, unit_square, DynamicEvent.move(2, 2, 3.0, 3.0), tau0=0.5)
    assert moved.ids == unit_square.ids
    assert np.all(moved_ph.tau[2, [0, 1, 3]] == 0.5)
    assert np.all(moved_ph.tau[[0, 1, 3], 2] == 0.5)
    assert moved_ph.edge(0, 1) == 5.0
    assert moved_ph.edge(3, 0) == 2.0

    with pytest.raises(EventApplicationError):
        handle_dynamic_event(ph, unit_square, DynamicEvent.remove(2, 9), tau0=0.5)


def test_run_hybrid_is_deterministic():
    inst = generate_random_instance(12, seed=31)
    params = HybridParams(aco=AcoParams(max_iters=15))
    a = run_hybrid(inst, None, params, seed=3)
    b = run_hybrid(inst, EventSchedule.empty(), params, seed=3)

    assert a.best_length_per_iter == b.best_length_per_iter
    assert a.x_per_iter == b.x_per_iter
    assert a.best_tour == b.best_tour
    assert a.solver == "hybrid"
    assert all(x >= y for x, y in zip(a.best_length_per_iter, a.best_length_per_iter[1:]))
    assert all(0.0 <= x <= params.resolved_x_max() for x in a.x_per_iter)


def test_hybrid_with_zero_step_matches_ant_system_with_local_search():
    inst = generate_random_instance(12, seed=8)
    params = HybridParams(aco=AcoParams(max_iters=15), t=0.0, stagnation_window=None)

    hybrid = run_hybrid(inst, None, params, seed=6)
    baseline = run_aco(inst, None, params.aco, seed=6, local_search=True)

    assert hybrid.best_length_per_iter == baseline.best_length_per_iter
    assert hybrid.best_tour == baseline.best_tour
    assert all(x == 0.0 for x in hybrid.x_per_iter)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_reinforcement_rises_only_when_best_improves(seed):
    inst = generate_random_instance(20, seed=seed)
    params = HybridParams(aco=AcoParams(max_iters=40, m=10), stagnation_window=None)
    result = run_hybrid(inst, None, params, seed=seed)

    best, x = result.best_length_per_iter, result.x_per_iter
    for k in range(1, len(best)):
        if best[k] >= best[k - 1]:
            assert x[k] <= x[k - 1], f"x rose at iteration {k + 1} without a better tour"


def test_stagnation_restart_is_recorded():
    # On 5 cities local search finds the optimum at once, so the colony best stalls
    inst = generate_random_instance(5, seed=1)
    params = HybridParams(aco=AcoParams(max_iters=12), stagnation_window=3)
    result = run_hybrid(inst, None, params, seed=0)

    assert result.reinit_iterations
    # history is cleared after each restart, so restarts are at least a window apart
    gaps = np.diff(result.reinit_iterations)
    assert np.all(gaps >= 3)


def test_best_only_local_search():
    inst = generate_random_instance(12, seed=4)
    params = HybridParams(aco=AcoParams(max_iters=8), local_search_best_only=True)
    result = run_hybrid(inst, None, params, seed=2)
    assert len(result.best_length_per_iter) == 8
    assert result.final_length == pytest.approx(tour_length(inst, result.best_tour.order))


def test_dynamic_run_tracks_city_set():
    """Insert at iteration 50 and remove at 75 on a 20-city base instance."""
    inst = generate_random_instance(20, seed=7)
    schedule = EventSchedule.of([
        DynamicEvent.insert(50, City(20, 55.0, 45.0)),
        DynamicEvent.remove(75, 3),
    ])
    params = HybridParams(aco=AcoParams(max_iters=80, m=10), local_search_best_only=True)

    first = run_hybrid(inst, schedule, params, seed=9)
    second = run_hybrid(inst, schedule, params, seed=9)

    assert first.event_iterations == [50, 75]
    assert first.best_length_per_iter == second.best_length_per_iter
    assert first.best_tour == second.best_tour

    final_ids = (set(inst.ids) | {20}) - {3}
    assert set(first.best_tour.order) == final_ids
    assert len(first.best_tour.order) == len(final_ids)

    # non-increasing between events
    trace = first.best_length_per_iter
    for lo, hi in ((0, 49), (49, 74), (74, 80)):
        segment = trace[lo:hi]
        assert all(x >= y for x, y in zip(segment, segment[1:]))


def test_hybrid_params_validation():
    with pytest.raises(ValueError):
        HybridParams(aco=AcoParams(tau0=5.0), tau_max=5.0)
    with pytest.raises(ValueError):
        HybridParams(t=-0.1)
    with pytest.raises(ValueError):
        HybridParams(stagnation_window=1)
    assert HybridParams().resolved_tau_max() == 100.0
    assert HybridParams().resolved_x_max() == 10.0

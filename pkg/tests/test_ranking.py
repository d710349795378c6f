import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vsdslayout.evolution import (
    constraint_dominance_compare,
    constraint_dominance_order,
    replace_truncate,
    stochastic_rank,
    tournament_select,
)


def ind(objective, total):
    return SimpleNamespace(objective=objective, total=total, feasible=total <= 1e-9)


# --- constraint dominance ----------------------------------------------------

def test_feasible_beats_infeasible():
    assert constraint_dominance_compare(ind(1e9, 0.0), ind(1.0, 0.1)) == -1
    assert constraint_dominance_compare(ind(1.0, 0.1), ind(1e9, 0.0)) == 1


def test_two_feasible_compare_objective():
    assert constraint_dominance_compare(ind(3.0, 0.0), ind(5.0, 0.0)) == -1


def test_two_infeasible_compare_violation():
    assert constraint_dominance_compare(ind(1.0, 0.5), ind(9.0, 0.2)) == 1


def test_tie():
    assert constraint_dominance_compare(ind(2.0, 0.0), ind(2.0, 0.0)) == 0


def test_order_is_feasible_by_objective_then_infeasible_by_violation():
    obj = np.array([5.0, 1.0, 3.0, 0.5, 2.0])
    tot = np.array([0.0, 0.3, 0.0, 0.1, 0.0])
    assert constraint_dominance_order(obj, tot, tot <= 1e-9).tolist() == [4, 2, 0, 3, 1]


# --- stochastic ranking ------------------------------------------------------

def mixed(rng, n=40):
    obj = rng.uniform(0, 100, n)
    tot = np.where(rng.random(n) < 0.4, 0.0, rng.uniform(0.01, 5, n))
    return obj, tot, tot <= 1e-9


def test_pf_zero_is_constraint_dominance():
    rng = np.random.default_rng(0)
    for _ in range(20):
        obj, tot, feas = mixed(rng)
        assert stochastic_rank(obj, tot, feas, 0.0, rng).tolist() == constraint_dominance_order(obj, tot, feas).tolist()


def test_pf_one_sorts_by_objective():
    rng = np.random.default_rng(1)
    for _ in range(20):
        obj, tot, feas = mixed(rng)
        assert stochastic_rank(obj, tot, feas, 1.0, rng).tolist() == np.argsort(obj, kind="stable").tolist()


def test_all_feasible_sorts_by_objective_for_any_pf():
    rng = np.random.default_rng(2)
    obj = rng.uniform(0, 1, 30)
    tot = np.zeros(30)
    for pf in (0.0, 0.45, 1.0):
        assert stochastic_rank(obj, tot, tot == 0, pf, rng).tolist() == np.argsort(obj).tolist()


def test_random_stream_advance_is_fixed():
    obj, tot = np.arange(10.0), np.zeros(10)
    a, b = np.random.default_rng(3), np.random.default_rng(3)
    stochastic_rank(obj, tot, tot == 0, 0.45, a)  # already sorted: stops after one sweep
    stochastic_rank(obj[::-1].copy(), tot, tot == 0, 0.45, b)
    assert a.random() == b.random()


def test_pf_out_of_range():
    with pytest.raises(ValueError):
        stochastic_rank([1.0], [0.0], [True], 1.5, np.random.default_rng())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_stochastic_rank_is_a_permutation(seed, pf):
    rng = np.random.default_rng(seed)
    obj, tot, feas = mixed(rng, int(rng.integers(1, 30)))
    order = stochastic_rank(obj, tot, feas, pf, rng)
    assert sorted(order.tolist()) == list(range(obj.size))


# --- tournament --------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 15])
def test_tournament_pressure(k):
    n, trials = 50, 20_000
    wins = tournament_select(np.arange(n), k, np.random.default_rng(k), trials) == 0
    p = 1 - (1 - 1 / n) ** k
    assert abs(wins.mean() - p) <= 3 * math.sqrt(p * (1 - p) / trials)


def test_full_tournament_without_replacement_picks_rank_one():
    ranks = np.random.default_rng(4).permutation(30)
    winners = tournament_select(ranks, 30, np.random.default_rng(5), 200, replace=False)
    assert np.all(ranks[winners] == 0)


def test_tournament_size_bounds():
    with pytest.raises(ValueError):
        tournament_select(np.arange(5), 6, np.random.default_rng(), 1)
    with pytest.raises(ValueError):
        tournament_select(np.arange(5), 0, np.random.default_rng(), 1)


# --- replacement -------------------------------------------------------------

def test_truncation_keeps_best_feasible():
    obj = np.array([9.0, 1.0, 4.0, 7.0, 0.1])
    tot = np.array([0.0, 0.0, 0.0, 0.0, 2.0])
    keep = replace_truncate(obj, tot, tot <= 1e-9, 3)
    assert keep.tolist() == [1, 2, 3]


def test_truncation_elitism_under_stochastic_ranking():
    rng = np.random.default_rng(6)
    obj = rng.uniform(0, 10, 60)
    tot = np.where(np.arange(60) < 30, 0.0, 1.0)
    best = int(np.argmin(np.where(tot == 0, obj, np.inf)))
    for _ in range(50):
        keep = replace_truncate(obj, tot, tot == 0, 30, "stochastic-ranking", 0.45, rng)
        assert best in keep


def test_truncation_unknown_strategy():
    with pytest.raises(ValueError):
        replace_truncate([1.0], [0.0], [True], 1, "pareto")
    with pytest.raises(ValueError):
        replace_truncate([1.0], [0.0], [True], 1, "stochastic-ranking")

"""Orderings for constrained selection and replacement."""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = [
    "constraint_dominance_compare",
    "constraint_dominance_order",
    "stochastic_rank",
    "tournament_select",
    "replace_truncate",
    "STRATEGIES",
]

STRATEGIES = ("constraint-dominance", "stochastic-ranking")


def constraint_dominance_compare(a, b) -> int:
    """-1 if ``a`` is better, 1 if ``b`` is better, 0 on a tie.

    Arguments expose ``objective``, ``total`` (violation) and ``feasible``.
    """
    if a.feasible != b.feasible:
        return -1 if a.feasible else 1
    ka, kb = (a.objective, b.objective) if a.feasible else (a.total, b.total)
    return -1 if ka < kb else (1 if ka > kb else 0)


def constraint_dominance_order(objective, total, feasible) -> np.ndarray:
    """Stable best-first permutation: feasible by objective, then infeasible by violation."""
    feasible = np.asarray(feasible, dtype=bool)
    key = np.where(feasible, objective, total)
    return np.lexsort((key, ~feasible))


@njit(cache=True)
def _bubble(order, objective, total, feasible, u, pf):
    n = order.shape[0]
    for sweep in range(u.shape[0]):
        swapped = False
        for j in range(n - 1):
            a = order[j]
            b = order[j + 1]
            if (feasible[a] and feasible[b]) or u[sweep, j] < pf:
                worse = objective[a] > objective[b]
            else:
                worse = total[a] > total[b]
            if worse:
                order[j] = b
                order[j + 1] = a
                swapped = True
        if not swapped:
            break
    return order


def stochastic_rank(objective, total, feasible, pf: float, rng: np.random.Generator, sweeps: int | None = None):
    """Stochastic bubble-sort ranking; returns a best-first permutation.

    The full block of uniforms is always drawn so the random stream advances
    by the same amount whether or not the sort stops early.
    """
    if not 0.0 <= pf <= 1.0:
        raise ValueError(f"pf must lie in [0, 1], got {pf}")
    objective = np.asarray(objective, dtype=np.float64)
    n = objective.shape[0]
    sweeps = n if sweeps is None else sweeps
    u = rng.random((sweeps, max(n - 1, 0)))
    order = np.arange(n, dtype=np.int64)
    return _bubble(order, objective, np.asarray(total, dtype=np.float64), np.asarray(feasible, dtype=np.bool_), u, pf)


def tournament_select(ranks, k: int, rng: np.random.Generator, n_select: int, replace: bool = True) -> np.ndarray:
    """Indices of ``n_select`` winners, each the best-ranked of ``k`` uniform draws.

    With ``replace=False`` the k entrants are distinct, so k equal to the
    population size always returns the rank-1 individual.
    """
    ranks = np.asarray(ranks)
    n = ranks.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"tournament size {k} outside [1, {n}]")
    if replace:
        draws = rng.integers(0, n, size=(n_select, k))
    else:
        draws = rng.permuted(np.tile(np.arange(n), (n_select, 1)), axis=1)[:, :k]
    best = np.argmin(ranks[draws], axis=1)
    return draws[np.arange(n_select), best]


def replace_truncate(objective, total, feasible, n_keep: int, strategy: str = "constraint-dominance",
                     pf: float = 0.45, rng: np.random.Generator | None = None) -> np.ndarray:
    """Order the pooled parents + offspring and keep the best ``n_keep`` indices, best first."""
    if strategy == "constraint-dominance":
        order = constraint_dominance_order(objective, total, feasible)
    elif strategy == "stochastic-ranking":
        if rng is None:
            raise ValueError("stochastic ranking needs a random generator")
        order = stochastic_rank(objective, total, feasible, pf, rng)
    else:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    return order[:n_keep]

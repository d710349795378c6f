"""Real-coded variation operators.

Both operators broadcast over leading axes: passing (n, L) parent matrices
varies n pairs / individuals in one call.
"""

from __future__ import annotations

import numpy as np

__all__ = ["sbx_crossover", "polynomial_mutation"]


def sbx_crossover(p1, p2, eta_c: float, prob_var: float, lower, upper, rng: np.random.Generator):
    """Simulated binary crossover with a symmetric spread factor.

    Each gene is crossed with probability ``prob_var``. Crossed genes satisfy
    (c1 + c2) / 2 == (p1 + p2) / 2 before the children are clipped to bounds,
    and the two children of a crossed gene are swapped with probability 1/2
    so neither child is biased toward one parent.
    """
    p1 = np.asarray(p1, dtype=np.float64)
    p2 = np.asarray(p2, dtype=np.float64)
    if p1.shape != p2.shape:
        raise ValueError(f"parents differ in shape: {p1.shape} vs {p2.shape}")
    u = rng.random(p1.shape)
    cross = rng.random(p1.shape) < prob_var
    swap = rng.random(p1.shape) < 0.5
    beta = np.where(
        u <= 0.5,
        (2.0 * u) ** (1.0 / (eta_c + 1.0)),
        (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta_c + 1.0)),
    )
    mean = 0.5 * (p1 + p2)
    half = np.where(swap, -0.5, 0.5) * beta * (p1 - p2)
    c1 = np.where(cross, mean + half, p1)
    c2 = np.where(cross, mean - half, p2)
    return np.clip(c1, lower, upper), np.clip(c2, lower, upper)


def polynomial_mutation(x, eta_m: float, prob_var: float, lower, upper, rng: np.random.Generator):
    """Bounded polynomial mutation; each gene mutates with probability ``prob_var``."""
    x = np.asarray(x, dtype=np.float64)
    lower = np.broadcast_to(np.asarray(lower, dtype=np.float64), x.shape)
    upper = np.broadcast_to(np.asarray(upper, dtype=np.float64), x.shape)
    u = rng.random(x.shape)
    hit = rng.random(x.shape) < prob_var
    span = upper - lower
    safe = np.where(span > 0, span, 1.0)
    d1 = (x - lower) / safe
    d2 = (upper - x) / safe
    power = 1.0 / (eta_m + 1.0)
    with np.errstate(invalid="ignore"):
        left = (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta_m + 1.0)) ** power - 1.0
        right = 1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta_m + 1.0)) ** power
    dq = np.where(u < 0.5, left, right)
    y = np.where(hit & (span > 0), x + dq * span, x)
    return np.clip(y, lower, upper)

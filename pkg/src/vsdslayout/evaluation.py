"""Batch evaluation of gene matrices against a problem.

Evaluation is a pure function of (genes, active slots), so it can be split
across threads in any way without changing a single bit of the output.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .catalog import GeneLayout
from .constraints import ConstraintConfig, evaluate_packed, weighted_total
from .geometry import ContainerDisk

__all__ = ["PopulationEvaluator", "EVAL_COLUMNS"]

# objective, h1, h2, h3, g1, g3, total
EVAL_COLUMNS = ("objective", "h1", "h2", "h3", "g1", "g3", "total")


@njit(cache=True, nogil=True)
def _evaluate_rows(genes, active, polar, offset, shape, radius, hx, hy, mass, kind,
                   big_r, zk, zx, zy, zr, zhx, zhy, za, tx, ty, delta, d_min, wa, wd, out):
    n_slots = offset.shape[0]
    px = np.empty(n_slots)
    py = np.empty(n_slots)
    pr = np.empty(n_slots)
    phx = np.empty(n_slots)
    phy = np.empty(n_slots)
    pa = np.empty(n_slots)
    pm = np.empty(n_slots)
    pk = np.empty(n_slots, dtype=np.int64)
    pc = np.empty(n_slots, dtype=np.int64)
    for row in range(genes.shape[0]):
        n = 0
        for s in range(n_slots):
            if not active[row, s]:
                continue
            o = offset[s]
            g0 = genes[row, o]
            g1 = genes[row, o + 1]
            if polar:
                px[n] = g0 * math.cos(g1)
                py[n] = g0 * math.sin(g1)
            else:
                px[n] = g0
                py[n] = g1
            pk[n] = shape[s]
            pr[n] = radius[s]
            phx[n] = hx[s]
            phy[n] = hy[s]
            pa[n] = genes[row, o + 2] if shape[s] == 1 else 0.0
            pm[n] = mass[s]
            pc[n] = kind[s]
            n += 1
        f, h1, h2, h3, c1, c3 = evaluate_packed(pk, px, py, pr, phx, phy, pa, pm, pc, n,
                                                big_r, zk, zx, zy, zr, zhx, zhy, za,
                                                tx, ty, delta, d_min)
        out[row, 0] = f
        out[row, 1] = h1
        out[row, 2] = h2
        out[row, 3] = h3
        out[row, 4] = c1
        out[row, 5] = c3
        out[row, 6] = weighted_total(h1, h2, h3, c1, c3, wa, wd)


@dataclass
class PopulationEvaluator:
    layout: GeneLayout
    container: ContainerDisk
    constraints: ConstraintConfig
    workers: int = 1

    def __post_init__(self):
        if self.container.center != (0.0, 0.0):
            raise ValueError("the evaluator assumes a container centered at the origin")
        a = self.layout.arrays
        self._static = (
            self.layout.parameterization == "polar",
            a["offset"], a["shape"], a["radius"], a["hx"], a["hy"], a["mass"], a["kind"],
        )
        cfg = self.constraints
        self._tail = (
            float(self.container.outer_radius),
            *cfg.zone_arrays,
            float(cfg.target_centroid[0]),
            float(cfg.target_centroid[1]),
            float(cfg.delta),
            float(cfg.d_min),
            float(cfg.area_weight),
            float(cfg.distance_weight),
        )

    def __call__(self, genes: np.ndarray, active: np.ndarray) -> np.ndarray:
        """Return an (n, 7) array with columns ``EVAL_COLUMNS``."""
        genes = np.ascontiguousarray(genes, dtype=np.float64)
        active = np.ascontiguousarray(active, dtype=np.bool_)
        if genes.ndim == 1:
            return self(genes[None, :], active[None, :])[0]
        out = np.empty((genes.shape[0], len(EVAL_COLUMNS)))
        if self.workers <= 1 or genes.shape[0] < 2 * self.workers:
            _evaluate_rows(genes, active, *self._static, *self._tail, out)
            return out
        bounds = np.linspace(0, genes.shape[0], self.workers + 1).astype(int)

        def run(k):
            lo, hi = bounds[k], bounds[k + 1]
            _evaluate_rows(genes[lo:hi], active[lo:hi], *self._static, *self._tail, out[lo:hi])

        with ThreadPoolExecutor(self.workers) as pool:
            list(pool.map(run, range(self.workers)))
        return out

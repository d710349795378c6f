"""Generational GA with hidden genes.

Every chromosome carries genes for all potential subcomponents; its
activation state picks the subdivision of each component and only the
matching gene slots reach the evaluator. Genes and activation states go
through separate crossover and mutation operators.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields, replace
from typing import Protocol

import numpy as np

from ..catalog import GeneLayout
from ..constraints import FEASIBILITY_TOL, Violations
from ..evaluation import PopulationEvaluator
from .encodings import METHODS, Encoding, TagEncoding, make_encoding
from .operators import polynomial_mutation, sbx_crossover
from .ranking import STRATEGIES, constraint_dominance_order, replace_truncate, stochastic_rank, tournament_select

__all__ = [
    "GAConfig",
    "Chromosome",
    "Individual",
    "GenerationRecord",
    "RunResult",
    "evolve",
    "HISTORY_COLUMNS",
]

log = logging.getLogger(__name__)

HISTORY_COLUMNS = (
    "generation",
    "best_objective",
    "median_objective",
    "h1",
    "h2",
    "h3",
    "g1",
    "g3",
    "feasible_count",
    "distinct_configurations",
)


@dataclass(frozen=True)
class GAConfig:
    pop_size: int = 200
    generations: int = 1000
    tournament_size: int = 15
    p_cross_genes: float = 0.9
    p_cross_activation: float = 0.9
    p_mut_genes: float = 0.2
    p_mut_activation: float = 0.2
    eta_c: float = 15.0
    eta_m: float = 20.0
    sbx_gene_prob: float = 0.5
    strategy: str = "stochastic-ranking"
    pf: float = 0.45
    tag_points: int = 1
    seed: int = 0
    workers: int = 1
    stop_when_feasible: bool = False

    def validate(self) -> None:
        errors = []
        for name in ("pop_size", "tournament_size", "tag_points", "workers"):
            if getattr(self, name) < 1:
                errors.append(f"{name} must be >= 1")
        if self.generations < 0:
            errors.append("generations must be >= 0")
        for name in ("p_cross_genes", "p_cross_activation", "p_mut_genes", "p_mut_activation",
                     "sbx_gene_prob", "pf"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                errors.append(f"{name} must lie in [0, 1], got {v}")
        if self.eta_c < 0 or self.eta_m < 0:
            errors.append("distribution indices must be >= 0")
        if self.strategy not in STRATEGIES:
            errors.append(f"strategy must be one of {', '.join(STRATEGIES)}")
        if self.tournament_size > self.pop_size:
            errors.append("tournament_size cannot exceed pop_size")
        if errors:
            raise ValueError("; ".join(errors))

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def with_(self, **kw) -> GAConfig:
        return replace(self, **kw)


@dataclass(frozen=True)
class Chromosome:
    genes: np.ndarray
    activation: np.ndarray
    method: str


@dataclass(frozen=True)
class Individual:
    chromosome: Chromosome
    selection: tuple[int, ...]
    objective: float
    violations: Violations

    @property
    def total(self) -> float:
        return self.violations.total

    @property
    def feasible(self) -> bool:
        return self.violations.total <= FEASIBILITY_TOL


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_objective: float
    median_objective: float
    h1: float
    h2: float
    h3: float
    g1: float
    g3: float
    feasible_count: int
    distinct_configurations: int

    def row(self) -> tuple:
        return tuple(getattr(self, c) for c in HISTORY_COLUMNS)


@dataclass
class RunResult:
    method: str
    config: GAConfig
    history: list[GenerationRecord]
    best: Individual
    first_feasible_generation: int | None
    configurations_all: int
    configurations_feasible: int
    initial_objectives: np.ndarray = field(repr=False)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.history], dtype=float)

    @property
    def best_curve(self) -> np.ndarray:
        return self.column("best_objective")


class ProblemLike(Protocol):
    layout: GeneLayout

    def evaluator(self, workers: int = 1) -> PopulationEvaluator: ...


class _Population:
    """Column store for one population, kept best-first."""

    def __init__(self, genes, states, evals, selections, config_idx):
        self.genes = genes
        self.states = states
        self.evals = evals
        self.selections = selections
        self.config_idx = config_idx

    def __len__(self):
        return self.genes.shape[0]

    @property
    def feasible(self):
        return self.evals[:, 6] <= FEASIBILITY_TOL

    def take(self, idx):
        return _Population(self.genes[idx], self.states[idx], self.evals[idx], self.selections[idx], self.config_idx[idx])

    @staticmethod
    def concat(a, b):
        return _Population(*(np.concatenate([x, y]) for x, y in zip(
            (a.genes, a.states, a.evals, a.selections, a.config_idx),
            (b.genes, b.states, b.evals, b.selections, b.config_idx),
        )))


def _individual(pop: _Population, i: int, method: str, layout_weights) -> Individual:
    e = pop.evals[i]
    wa, wd = layout_weights
    return Individual(
        Chromosome(pop.genes[i].copy(), pop.states[i].copy(), method),
        tuple(int(v) for v in pop.selections[i]),
        float(e[0]),
        Violations(*map(float, e[1:6]), area_weight=wa, distance_weight=wd),
    )


def _order(pop: _Population, cfg: GAConfig, rng) -> np.ndarray:
    e = pop.evals
    if cfg.strategy == "constraint-dominance":
        return constraint_dominance_order(e[:, 0], e[:, 6], pop.feasible)
    return stochastic_rank(e[:, 0], e[:, 6], pop.feasible, cfg.pf, rng)


def evolve(problem: ProblemLike, method: str, cfg: GAConfig) -> RunResult:
    """Run one seeded GA; identical inputs give bit-identical results."""
    cfg.validate()
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    layout = problem.layout
    encoding = make_encoding(method, layout.space, **({"n_points": cfg.tag_points} if method == "tags" else {}))
    evaluate = problem.evaluator(workers=cfg.workers)
    weights = (evaluate.constraints.area_weight, evaluate.constraints.distance_weight)
    slot_comp = layout.arrays["component"]
    slot_opt = layout.arrays["option"]
    lower, upper = layout.lower, layout.upper
    n = cfg.pop_size
    rng = np.random.default_rng(cfg.seed)

    def assess(genes, states):
        sel = encoding.decode(states)
        active = sel[:, slot_comp] == slot_opt[None, :]
        evals = evaluate(genes, active)
        return _Population(genes, states, evals, sel, encoding.config_index(states))

    # Initial draws do not depend on the method, so runs sharing a seed share
    # their starting layouts and configurations.
    genes0 = rng.uniform(lower, upper, size=(n, layout.length))
    states0 = encoding.encode(encoding.random_selections(rng, n))
    pop = assess(genes0, states0)
    initial_objectives = pop.evals[:, 0].copy()
    pop = pop.take(_order(pop, cfg, rng))

    seen_all: set[int] = set()
    seen_feasible: set[int] = set()
    history: list[GenerationRecord] = []
    best: Individual | None = None
    first_feasible = None

    def record(gen: int, pop: _Population):
        nonlocal best, first_feasible
        feas = pop.feasible
        seen_all.update(pop.config_idx.tolist())
        seen_feasible.update(pop.config_idx[feas].tolist())
        if feas.any():
            if first_feasible is None:
                first_feasible = gen
            fi = np.flatnonzero(feas)
            i = fi[np.argmin(pop.evals[fi, 0])]
            if best is None or not best.feasible or pop.evals[i, 0] < best.objective:
                best = _individual(pop, i, method, weights)
        elif best is None or not best.feasible:
            i = int(np.argmin(pop.evals[:, 6]))
            if best is None or pop.evals[i, 6] < best.total:
                best = _individual(pop, i, method, weights)
        med = np.median(pop.evals[:, :6], axis=0)
        history.append(
            GenerationRecord(
                gen,
                best.objective if best.feasible else float("nan"),
                float(med[0]),
                *map(float, med[1:6]),
                int(feas.sum()),
                int(np.unique(pop.config_idx).size),
            )
        )

    record(0, pop)
    n_pairs = (n + 1) // 2
    is_tags = isinstance(encoding, TagEncoding)
    # P_m for activation states is per individual: about one activation variable
    # changes per mutated child, whatever the encoding width.
    act_rate = cfg.p_mut_activation / max(encoding.mutation_units, 1)
    for gen in range(1, cfg.generations + 1):
        if cfg.stop_when_feasible and first_feasible is not None:
            break
        ranks = np.arange(n)  # population is stored best-first
        parents = tournament_select(ranks, cfg.tournament_size, rng, 2 * n_pairs)
        pa, pb = parents[0::2], parents[1::2]

        cross = rng.random(n_pairs) < cfg.p_cross_genes
        ga, gb = sbx_crossover(pop.genes[pa], pop.genes[pb], cfg.eta_c, cfg.sbx_gene_prob, lower, upper, rng)
        ga = np.where(cross[:, None], ga, pop.genes[pa])
        gb = np.where(cross[:, None], gb, pop.genes[pb])
        if is_tags:
            sa, sb = encoding.crossover(pop.states[pa], pop.states[pb], rng, cfg.p_cross_activation)
        else:
            sa, sb = encoding.crossover(pop.states[pa], pop.states[pb], rng, cfg.p_cross_activation, eta_c=cfg.eta_c)
        child_genes = np.concatenate([ga, gb])[:n]
        child_states = np.concatenate([sa, sb])[:n]

        child_genes = polynomial_mutation(child_genes, cfg.eta_m, cfg.p_mut_genes, lower, upper, rng)
        if is_tags:
            child_states = encoding.mutate(child_states, rng, act_rate)
        else:
            child_states = encoding.mutate(child_states, rng, act_rate, eta_m=cfg.eta_m)

        offspring = assess(child_genes, child_states)
        pool = _Population.concat(pop, offspring)
        e = pool.evals
        keep = replace_truncate(e[:, 0], e[:, 6], pool.feasible, n, cfg.strategy, cfg.pf, rng)
        pop = pool.take(keep)
        record(gen, pop)

    log.debug("run %s seed %d: first feasible %s", method, cfg.seed, first_feasible)
    return RunResult(
        method=method,
        config=cfg,
        history=history,
        best=best,
        first_feasible_generation=first_feasible,
        configurations_all=len(seen_all),
        configurations_feasible=len(seen_feasible),
        initial_objectives=initial_objectives,
    )

"""Problem builders, hyperparameter presets, multi-run batches and run statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .catalog import Catalog, GeneLayout, LayoutInstance, build_gene_layout, decode, default_catalog_path, load_catalog, occupation_rate, scale_for_occupation_rate
from .constraints import ConstraintConfig, Violations, evaluate_all
from .evaluation import PopulationEvaluator
from .evolution import GAConfig, RunResult, evolve
from .geometry import ContainerDisk, PlacedShape
from .physics import total_inertia

__all__ = [
    "ProblemInstance",
    "RunStats",
    "Batch",
    "toy_case",
    "satellite_case",
    "default_satellite_radius",
    "default_exclusion_zone",
    "toy_config",
    "satellite_config",
    "PAPER_SATELLITE_CONFIG",
    "EVAL_BUDGET_SATELLITE_CONFIG",
    "run_batch",
    "compute_stats",
    "OCCUPATION_RATES",
]

OCCUPATION_RATES = (0.3, 0.4, 0.5, 0.6, 0.7)
BASE_OCCUPATION_RATE = 0.3


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    name: str
    catalog: Catalog
    container: ContainerDisk
    constraints: ConstraintConfig
    layout: GeneLayout

    @property
    def parameterization(self) -> str:
        return self.layout.parameterization

    @property
    def occupation_rate(self) -> float:
        return occupation_rate(self.catalog, self.container)

    def evaluator(self, workers: int = 1) -> PopulationEvaluator:
        return PopulationEvaluator(self.layout, self.container, self.constraints, workers=workers)

    def decode(self, genes, selection) -> LayoutInstance:
        return decode(genes, selection, self.layout)

    def evaluate(self, genes, selection) -> tuple[float, Violations]:
        lay = self.decode(genes, selection)
        return total_inertia(lay), evaluate_all(lay, self.constraints, self.container)


def toy_case(path: str | None = None) -> ProblemInstance:
    """Two cylinders that may each be split in two: four configurations, twelve polar genes.

    Only overlap, containment and centroid constraints are active.
    """
    cat = load_catalog(path or default_catalog_path("toy.json"))
    if cat.container_radius is None:
        raise ValueError("toy fixture must define the container radius")
    container = ContainerDisk(cat.container_radius)
    cfg = ConstraintConfig.for_container(container, d_min=0.0, exclusion_zones=cat.exclusion_zones)
    return ProblemInstance("toy", cat, container, cfg, build_gene_layout(cat, container.outer_radius, "polar"))


def default_satellite_radius(catalog: Catalog, base_rate: float = BASE_OCCUPATION_RATE) -> float:
    """Plate radius at which ``catalog`` occupies ``base_rate`` of the plate."""
    return math.sqrt(catalog.total_area / (base_rate * math.pi))


def default_exclusion_zone(radius: float) -> PlacedShape:
    """Upright 1:2 rectangle of 5% of the plate area, centered at half the radius on +x."""
    area = 0.05 * math.pi * radius**2
    width = math.sqrt(area / 2.0)
    return PlacedShape.rectangle((radius / 2.0, 0.0), width, 2.0 * width, 0.0)


def satellite_case(
    target_or: float = 0.3,
    catalog: Catalog | str | None = None,
    container_radius: float | None = None,
    exclusion_zones=None,
    d_min: float = 300.0,
    parameterization: str = "cartesian",
) -> ProblemInstance:
    if not 0.0 < target_or < 1.0:
        raise ValueError(f"occupation rate must lie in (0, 1), got {target_or}")
    if catalog is None or isinstance(catalog, str):
        catalog = load_catalog(catalog or default_catalog_path())
    radius = container_radius or catalog.container_radius or default_satellite_radius(catalog)
    container = ContainerDisk(radius)
    if exclusion_zones is None:
        exclusion_zones = catalog.exclusion_zones or (default_exclusion_zone(radius),)
    scaled = scale_for_occupation_rate(catalog, target_or, container)
    cfg = ConstraintConfig.for_container(container, d_min=d_min, exclusion_zones=tuple(exclusion_zones))
    return ProblemInstance(
        f"satellite-or{round(target_or * 100)}",
        scaled,
        container,
        cfg,
        build_gene_layout(scaled, radius, parameterization),
    )


_TOY_COMMON = dict(pop_size=50, generations=60, tournament_size=2, strategy="constraint-dominance")
_TOY_BY_METHOD = {
    "tags": dict(p_cross_genes=0.85, p_cross_activation=0.85, p_mut_genes=0.25, p_mut_activation=0.4),
    "dv-num": dict(p_cross_genes=0.85, p_cross_activation=0.85, p_mut_genes=0.35, p_mut_activation=0.35),
    "dv-int": dict(p_cross_genes=0.85, p_cross_activation=0.85, p_mut_genes=0.35, p_mut_activation=0.35),
    "dv-bin": dict(p_cross_genes=0.9, p_cross_activation=0.9, p_mut_genes=0.4, p_mut_activation=0.4),
}


def toy_config(method: str, seed: int = 0, **overrides) -> GAConfig:
    return GAConfig(**{**_TOY_COMMON, **_TOY_BY_METHOD[method], "seed": seed, **overrides})


def satellite_config(seed: int = 0, **overrides) -> GAConfig:
    """Desk-scale budget with the satellite operator stack."""
    base = dict(
        pop_size=200,
        generations=1000,
        tournament_size=15,
        p_cross_genes=0.9,
        p_cross_activation=0.9,
        p_mut_genes=0.2,
        p_mut_activation=0.2,
        strategy="stochastic-ranking",
        pf=0.45,
    )
    return GAConfig(**{**base, "seed": seed, **overrides})


# 500 individuals x 7000 generations, as listed with the operator stack.
PAPER_SATELLITE_CONFIG = satellite_config(pop_size=500, generations=7000)
# The stated evaluation budget of 3.5e5 with the same population.
EVAL_BUDGET_SATELLITE_CONFIG = satellite_config(pop_size=500, generations=700)


def _finite_or_none(x):
    x = float(x)
    return x if math.isfinite(x) else None


@dataclass
class RunStats:
    n_runs: int
    generations: np.ndarray
    median_curve: np.ndarray
    q25_curve: np.ndarray
    q75_curve: np.ndarray
    iqr_curve: np.ndarray
    first_feasible: list
    success_count: int
    configurations_all: list
    configurations_feasible: list
    best_objective: float
    best_run: int

    @property
    def final_median(self) -> float:
        return float(self.median_curve[-1])

    @property
    def final_iqr(self) -> float:
        return float(self.iqr_curve[-1])

    @property
    def mean_first_feasible(self) -> float | None:
        found = [g for g in self.first_feasible if g is not None]
        return float(np.mean(found)) if found else None

    @property
    def median_first_feasible(self) -> float:
        """Median over runs, counting runs that never became feasible as +inf."""
        vals = [math.inf if g is None else g for g in self.first_feasible]
        return float(np.median(vals))

    def to_dict(self) -> dict:
        return {
            "n_runs": self.n_runs,
            "success_count": self.success_count,
            "final_median": _finite_or_none(self.final_median),
            "final_iqr": _finite_or_none(self.final_iqr),
            "mean_first_feasible_generation": self.mean_first_feasible,
            "median_first_feasible_generation": _finite_or_none(self.median_first_feasible),
            "first_feasible_generation": list(self.first_feasible),
            "configurations_all": list(self.configurations_all),
            "configurations_feasible": list(self.configurations_feasible),
            "best_objective": _finite_or_none(self.best_objective),
            "best_run": self.best_run,
            "median_curve": [_finite_or_none(v) for v in self.median_curve],
            "iqr_curve": [_finite_or_none(v) for v in self.iqr_curve],
        }


def _quantile(a: np.ndarray, q: float) -> np.ndarray:
    """Column-wise linear quantile that returns +inf instead of NaN when a neighbour is infinite."""
    s = np.sort(a, axis=0)
    pos = (s.shape[0] - 1) * q
    lo, hi = int(np.floor(pos)), int(np.ceil(pos))
    frac = pos - lo
    if frac == 0.0:
        return s[lo].copy()
    with np.errstate(invalid="ignore"):
        out = s[lo] + (s[hi] - s[lo]) * frac
    return np.where(np.isinf(s[hi]), np.inf, out)


def compute_stats(runs: list[RunResult]) -> RunStats:
    """Pointwise quantiles of best-so-far curves; a run with no feasible point yet counts as +inf."""
    if not runs:
        raise ValueError("no runs to summarize")
    length = max(len(r.history) for r in runs)
    curves = np.full((len(runs), length), np.inf)
    for i, r in enumerate(runs):
        c = np.nan_to_num(r.best_curve, nan=np.inf)
        curves[i, : c.size] = c
        curves[i, c.size :] = c[-1]  # runs stopped early keep their last value
    q25, q50, q75 = (_quantile(curves, q) for q in (0.25, 0.5, 0.75))
    with np.errstate(invalid="ignore"):
        iqr = np.where(np.isfinite(q75), q75 - q25, np.nan)
    finals = curves[:, -1]
    best_run = int(np.argmin(finals))
    return RunStats(
        n_runs=len(runs),
        generations=np.arange(length),
        median_curve=q50,
        q25_curve=q25,
        q75_curve=q75,
        iqr_curve=iqr,
        first_feasible=[r.first_feasible_generation for r in runs],
        success_count=sum(1 for r in runs if r.best.feasible),
        configurations_all=[r.configurations_all for r in runs],
        configurations_feasible=[r.configurations_feasible for r in runs],
        best_objective=float(finals[best_run]),
        best_run=best_run,
    )


@dataclass
class Batch:
    problem: ProblemInstance
    method: str
    seeds: list[int]
    runs: list[RunResult]
    stats: RunStats = field(init=False)

    def __post_init__(self):
        self.stats = compute_stats(self.runs)


def run_batch(problem: ProblemInstance, method: str, cfg: GAConfig, seeds) -> Batch:
    """One run per seed. Seeds fix the initial population independently of the method."""
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise ValueError("at least one seed is required")
    runs = [evolve(problem, method, replace(cfg, seed=s)) for s in seeds]
    return Batch(problem, method, seeds, runs)

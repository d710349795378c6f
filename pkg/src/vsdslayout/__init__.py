"""Hidden-gene genetic algorithm for variable-size design space layout problems.

Components that may be split into several identical parts make the number
of design variables depend on the chosen configuration. Every chromosome
carries the genes of all possible parts and an activation state (tags or
dimensional variables) decides which of them are expressed.
"""

from .catalog import (
    Catalog,
    CatalogError,
    Component,
    ConfigurationSpace,
    GeneLayout,
    LayoutInstance,
    build_gene_layout,
    configuration_count,
    decode,
    expand_subdivisions,
    load_catalog,
    occupation_rate,
    scale_for_occupation_rate,
)
from .constraints import ConstraintConfig, Violations, evaluate_all
from .evolution import GAConfig, RunResult, evolve
from .experiments import ProblemInstance, RunStats, compute_stats, run_batch, satellite_case, toy_case
from .geometry import ContainerDisk, PlacedShape, shape_overlap_area
from .physics import system_centroid, total_inertia

__version__ = "0.1.0"

__all__ = [
    "Catalog",
    "CatalogError",
    "Component",
    "ConfigurationSpace",
    "ConstraintConfig",
    "ContainerDisk",
    "GAConfig",
    "GeneLayout",
    "LayoutInstance",
    "PlacedShape",
    "ProblemInstance",
    "RunResult",
    "RunStats",
    "Violations",
    "build_gene_layout",
    "compute_stats",
    "configuration_count",
    "decode",
    "evaluate_all",
    "evolve",
    "expand_subdivisions",
    "load_catalog",
    "occupation_rate",
    "run_batch",
    "satellite_case",
    "scale_for_occupation_rate",
    "shape_overlap_area",
    "system_centroid",
    "toy_case",
    "total_inertia",
]

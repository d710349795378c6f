"""Hidden-genes genetic algorithm: encodings, operators, orderings and the run loop."""

from .encodings import (
    METHODS,
    BinaryDVEncoding,
    Encoding,
    IntegerDVEncoding,
    NumericIndexDVEncoding,
    TagEncoding,
    dv_variation,
    make_encoding,
    tag_crossover,
    tag_mutation,
)
from .engine import HISTORY_COLUMNS, Chromosome, GAConfig, GenerationRecord, Individual, RunResult, evolve
from .operators import polynomial_mutation, sbx_crossover
from .ranking import (
    STRATEGIES,
    constraint_dominance_compare,
    constraint_dominance_order,
    replace_truncate,
    stochastic_rank,
    tournament_select,
)

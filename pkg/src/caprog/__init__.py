"""Behavioural programmability measurements on cellular automata.

The pipeline: enumerate input families whose consecutive members differ
minimally, evolve a system on each member over increasing runtimes,
compress each evolution to estimate its complexity, and fit how fast the
normalized complexity differences grow with runtime. The fitted slope (the
transition coefficient) separates systems that react to their inputs from
inert ones, and supports equality and closeness comparisons between
systems measured on a shared parameter grid.
"""
from .classify import (
    EPSILON_FLOOR,
    INERT_ECA,
    INERT_LIFE,
    IncomparableError,
    SweepReport,
    behaviourally_equivalent,
    c_equivalent,
    calibrate_epsilon,
    computes,
    is_zero_computer,
    kmeans_clusters,
    r30_grouping,
    sweep_eca,
)
from .coefficient import (
    CoefficientResult,
    DegenerateFitError,
    FitResult,
    RunParams,
    VariabilityCurve,
    difference_sum,
    fit_line,
    measure,
    sample_times,
    transition_coefficient,
    variability_curve,
)
from .complexity import (
    COMPRESSOR_ID,
    ComplexityValue,
    compressed_size,
    deserialize,
    evolution_complexity,
    serialize,
)
from .engine import (
    CYCLIC,
    FIXED,
    GAME_OF_LIFE,
    Configuration,
    Evolution,
    LifeEvolution,
    LifeGrid,
    LifeRule,
    RuleTable,
    conjugate_rule,
    default_width,
    evolve,
    life_evolve,
    life_step,
    replay_check,
    rule_from_number,
    rule_to_number,
    step,
)
from .enumeration import (
    InputFamily,
    gray_code,
    gray_initials,
    gray_patches,
    random_initials,
)

__version__ = "0.1.0"

"""Survival functions and their conditional-aggregation-based generalization
over monotone measures on finite ground sets, with exact rational
arithmetic, condition checking with witnesses, and characterization of the
operator families for which both notions coincide."""

from .errors import (
    ApproxOperatorWithoutTolerance,
    CollectionNotPowerset,
    ConsistencyViolation,
    EmptySetNonzero,
    GridInvalid,
    GsurvError,
    LatticeViolation,
    MeasureError,
    NotMonotone,
    NotMonotoneFamily,
    ParseError,
    ProbeMalformed,
    TotalNotPositive,
    ValuesNotMonotone,
    WrongLength,
)
from .setfun import (
    GroundSet,
    MonotoneMeasure,
    Value,
    counting_measure,
    elements,
    format_subset,
    format_value,
    format_vector,
    is_null_set,
    is_strictly_monotone_on,
    measure_from_json,
    measure_to_json,
    parse_subset,
    parse_value,
    parse_vector,
    random_monotone_measure,
    strict_binary_measure,
    validate_measure,
    weakest_measure,
)
from .levels import LevelSystem, SortedView, level_indices, measure_level_indices, sorted_view
from .aggops import (
    AggregationOperator,
    ChoquetOperator,
    CustomOperator,
    CustomSize,
    EssentialSupOperator,
    Fca,
    MaxOperator,
    MonotonicityVerdict,
    PowerMeanOperator,
    PowerMeanSize,
    ShilkretOperator,
    SizeOperator,
    SugenoOperator,
    SumOperator,
    SumSize,
    ValidationReport,
    WeightedMaxOperator,
    agg_ess_sup,
    agg_jintegral,
    agg_max,
    agg_pmean,
    agg_size,
    agg_sum,
    agg_weighted_max,
    chain_collection,
    collection_from_json,
    collection_to_json,
    is_nondecreasing_wrt_sets,
    operator_from_json,
    operator_to_json,
    powerset_collection,
    validate_cao,
)
from .survival import (
    Relation,
    StepComparison,
    StepFn,
    SURVIVAL_METHODS,
    aggregation_table,
    gsf,
    step_compare,
    stepfn_from_json,
    stepfn_to_json,
    survival_standard,
)
from .conditions import (
    ComparisonVerdict,
    ConditionKind,
    ConditionReport,
    LatticeReport,
    LatticeRow,
    check_condition,
    compare_survival,
    condition_lattice_check,
)
from .characterize import (
    CounterexampleWitness,
    Verdict,
    VerdictStatus,
    equality_all_measures_monotone_fca,
    equality_for_all_measures,
    indistinguishable,
    max_family_check,
    measure_from_max_levels,
    search_counterexample,
)
from .plotting import DiagramModel, diagram_model, render_parallel_svg, render_step_svg
from .cli import ProblemSpec, emit_problem, load_problem

__version__ = "0.1.0"

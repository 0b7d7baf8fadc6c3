"""sglab: metric semigroups, random walks on them, and inequality verification."""

from .algebra import (
    ADJOINED_IDENTITY,
    Exhaustive,
    MetricMagmaInstance,
    Sampled,
    adjoin_identity,
    affine,
    builtin_instances,
    check_associativity,
    check_invariance,
    check_metric_axioms,
    compose,
    counterexample,
    cyclic,
    distance,
    euclidean,
    get_instance,
    heisenberg,
    idempotent_scan,
    positive_reals,
    two_homogeneity_check,
)
from .errors import (
    BudgetExceeded,
    ConstraintViolation,
    HypothesisNotSatisfied,
    IdempotentPresent,
    LambdaNotLessThanOne,
    NotStronglyLeftInvariant,
    SglabError,
    UnknownInstance,
)
from .inequalities import (
    HJParams,
    InequalityReport,
    hj_general,
    hj_hm,
    hj_lt,
    i0_set,
    js_bound,
    kn_bounds,
    kn_scalar_lemma,
    levy_ottaviani,
    mogulskii,
    moment_bound,
    ottaviani_skorohod,
    rearrangement_ratio,
    stress_search,
)
from .probability import (
    Exact,
    FiniteDistribution,
    MCEstimate,
    MonteCarlo,
    PathStatistics,
    RearrangementFunction,
    decreasing_rearrangement,
    exact_event_prob,
    exact_event_probs,
    exact_statistic_laws,
    levy_diagnostic,
    mc_event_prob,
    mc_event_probs,
    partial_products,
    path_statistics,
    pigeonhole_power_check,
    tail_moment_identity,
)

__version__ = "0.1.0"

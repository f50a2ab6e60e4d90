"""Branching processes in fixed, globally changing and locally changing
random environments: analytics, Monte Carlo simulation and estimators."""

from .analytics import (
    BracketFailureError,
    CriticalThreshold,
    GlobalClass,
    GlobalVerdict,
    RegimeClass,
    RegimeLabel,
    classify_global,
    classify_local,
    critical_r_uniform,
    expect_abs_log_survival_terms,
    expect_log_mean,
    expect_mean,
    expected_tree_offspring,
    expected_tree_offspring_quadrature,
    jensen_gap,
)
from .backend import active_backend, get_kernels
from .estimators import (
    SurvivalEstimate,
    TreeOffspringEstimate,
    estimate_survival,
    estimate_tree_offspring,
    sweep,
    wilson_interval,
)
from .laws import (
    MeanLaw,
    OffspringFamily,
    aggregate_offspring,
    mass_above,
    parse_family,
    parse_mean_law,
    sample_mean,
    sample_offspring,
)
from .simulator import (
    Fixed,
    Global,
    GlobalState,
    Local,
    LocalPopulation,
    SimConfig,
    TreeOfTypes,
    TrialOutcome,
    TrialStatus,
    run_trial,
    run_trials,
    step_fixed,
    step_global,
    step_local,
    trial_rng,
)

__version__ = "0.1.0"

__all__ = [
    "BracketFailureError",
    "CriticalThreshold",
    "Fixed",
    "Global",
    "GlobalClass",
    "GlobalState",
    "GlobalVerdict",
    "Local",
    "LocalPopulation",
    "MeanLaw",
    "OffspringFamily",
    "RegimeClass",
    "RegimeLabel",
    "SimConfig",
    "SurvivalEstimate",
    "TreeOfTypes",
    "TreeOffspringEstimate",
    "TrialOutcome",
    "TrialStatus",
    "active_backend",
    "aggregate_offspring",
    "classify_global",
    "classify_local",
    "critical_r_uniform",
    "estimate_survival",
    "estimate_tree_offspring",
    "expect_abs_log_survival_terms",
    "expect_log_mean",
    "expect_mean",
    "expected_tree_offspring",
    "expected_tree_offspring_quadrature",
    "get_kernels",
    "jensen_gap",
    "mass_above",
    "parse_family",
    "parse_mean_law",
    "run_trial",
    "run_trials",
    "sample_mean",
    "sample_offspring",
    "step_fixed",
    "step_global",
    "step_local",
    "sweep",
    "trial_rng",
    "wilson_interval",
]

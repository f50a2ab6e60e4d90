"""Monte Carlo estimators: survival probability with Wilson intervals,
empirical tree-of-types offspring moments, and the (a, r) sweep table."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytics
from .backend import get_kernels
from .laws import MeanLaw, OffspringFamily
from .simulator import Fixed, Global, Local, Regime, SimConfig, run_trials, trial_rng

Z_95 = 1.959963984540054  # two-sided 95% normal quantile


def wilson_interval(
    successes: int, trials: int, z: float = Z_95
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion; well behaved at the
    boundaries, which is where survival estimates live."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    n = float(trials)
    p_hat = successes / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p_hat + z2 / (2.0 * n)) / denom
    half = (z / denom) * math.sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n))
    lo = max(0.0, center - half)
    hi = min(1.0, center + half)
    # the exact interval always contains p_hat; don't let rounding break that
    return min(lo, p_hat), max(hi, p_hat)


@dataclass(frozen=True)
class SurvivalEstimate:
    trials: int
    survivals: int
    p_hat: float
    ci_lo: float
    ci_hi: float
    proxy_params: tuple[int, int]  # (max_generations, population_cap)


@dataclass(frozen=True)
class TreeOffspringEstimate:
    trials: int
    censored: int
    mean_x: float
    mean_x1: float
    lemma2_ratio: float
    expected_ratio: float
    se_x: float
    se_x1: float
    se_ratio: float


def estimate_survival(
    regime: Regime,
    law: MeanLaw | None,
    family: OffspringFamily,
    cfg: SimConfig,
    trials: int,
    backend: str | None = None,
) -> SurvivalEstimate:
    """Survival-proxy fraction over trial indices 0..trials-1."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    survivals = 0
    for outcome in run_trials(regime, law, family, cfg, trials, backend=backend):
        if outcome.survived_proxy:
            survivals += 1
    lo, hi = wilson_interval(survivals, trials)
    return SurvivalEstimate(
        trials=trials,
        survivals=survivals,
        p_hat=survivals / trials,
        ci_lo=lo,
        ci_hi=hi,
        proxy_params=(cfg.max_generations, cfg.population_cap),
    )


def estimate_tree_offspring(
    law: MeanLaw,
    family: OffspringFamily,
    r: float,
    subtree_cap: int,
    trials: int,
    cfg: SimConfig,
    backend: str | None = None,
) -> TreeOffspringEstimate:
    """Per trial, simulate the type-1 subtree and tally mutant births (x)
    and same-type births (x1); trials whose subtree exceeds ``subtree_cap``
    are censored and excluded from the means."""
    if not 0.0 < r < 1.0:
        raise ValueError("invalid-parameters: r must be in (0, 1)")
    threshold = 1.0 / (1.0 - r)
    if law.mass_above(threshold) > 0.0 or law.atom_weight(threshold) > 0.0:
        raise ValueError(
            "invalid-parameters: mu has mass at or above 1/(1-r); "
            "the type-1 subtree would explode and censoring would dominate"
        )
    if trials < 1:
        raise ValueError("trials must be >= 1")
    kernels = get_kernels(backend)
    law_enc = law.encode()
    tpp = cfg.per_type_individual_threshold
    xs = np.empty(trials)
    x1s = np.empty(trials)
    kept = 0
    censored = 0
    for i in range(trials):
        rng = trial_rng(cfg.seed, i)
        x, x1, cens = kernels.run_subtree_trial(
            rng, law_enc, family.code, r, subtree_cap, tpp
        )
        if cens:
            censored += 1
            continue
        xs[kept] = x
        x1s[kept] = x1
        kept += 1
    if kept == 0:
        raise ValueError("all trials censored; raise subtree_cap")
    xs = xs[:kept]
    x1s = x1s[:kept]
    mean_x = float(xs.mean())
    mean_x1 = float(x1s.mean())
    var_x = float(xs.var(ddof=1)) if kept > 1 else 0.0
    var_x1 = float(x1s.var(ddof=1)) if kept > 1 else 0.0
    cov = float(np.cov(xs, x1s, ddof=1)[0, 1]) if kept > 1 else 0.0
    se_x = math.sqrt(var_x / kept)
    se_x1 = math.sqrt(var_x1 / kept)
    if mean_x1 > 0.0:
        ratio = mean_x / mean_x1
        # delta method for the ratio of correlated means
        var_ratio = (
            var_x - 2.0 * ratio * cov + ratio * ratio * var_x1
        ) / (kept * mean_x1 * mean_x1)
        se_ratio = math.sqrt(max(0.0, var_ratio))
    else:
        ratio = math.nan
        se_ratio = math.nan
    return TreeOffspringEstimate(
        trials=trials,
        censored=censored,
        mean_x=mean_x,
        mean_x1=mean_x1,
        lemma2_ratio=ratio,
        expected_ratio=r / (1.0 - r),
        se_x=se_x,
        se_x1=se_x1,
        se_ratio=se_ratio,
    )


SWEEP_COLUMNS = (
    "a",
    "r",
    "e_mean",
    "e_log_mean",
    "e_x",
    "local_class",
    "global_class",
    "fixed_class",
    "regime",
    "trials",
    "survivals",
    "p_hat",
    "ci_lo",
    "ci_hi",
    "status",
)

SWEEP_REGIMES = ("fixed", "global", "local")


def _cell_seed(master_seed: int, cell_index: int, regime_index: int) -> int:
    ss = np.random.SeedSequence(
        entropy=master_seed, spawn_key=(cell_index, regime_index)
    )
    return int(ss.generate_state(1, np.uint64)[0])


def sweep(
    grid: list[tuple[float, float]],
    family: OffspringFamily,
    cfg: SimConfig,
    trials: int,
    regimes: tuple[str, ...] = SWEEP_REGIMES,
    backend: str | None = None,
):
    """Yield one row dict per (a, r, regime) cell in grid order.

    Analytic columns are computed once per (a, r); Monte Carlo columns per
    regime.  With ``trials == 0`` a single analytics-only row is emitted per
    grid point.  Analytic errors land in the ``status`` column instead of
    aborting the sweep.
    """
    if not grid:
        raise ValueError("grid must be nonempty")
    for cell_index, (a, r) in enumerate(grid):
        row = {c: "" for c in SWEEP_COLUMNS}
        row["a"] = a
        row["r"] = r
        row["status"] = "ok"
        law = None
        try:
            law = MeanLaw.uniform(a)
            e_mean = analytics.expect_mean(law)
            row["e_mean"] = e_mean
            row["e_log_mean"] = analytics.expect_log_mean(law)
            row["e_x"] = analytics.expected_tree_offspring(law, r)
            row["local_class"] = str(analytics.classify_local(law, r).label)
            row["global_class"] = str(analytics.classify_global(law, family).verdict)
            row["fixed_class"] = "Survives" if e_mean > 1.0 else "DiesOut"
        except (ValueError, ArithmeticError) as exc:
            row["status"] = str(exc).replace(",", ";")
        if trials == 0 or law is None:
            yield dict(row)
            continue
        for regime_index, regime_name in enumerate(regimes):
            mc_row = dict(row)
            mc_row["regime"] = regime_name
            try:
                regime: Regime
                if regime_name == "fixed":
                    regime = Fixed(analytics.expect_mean(law))
                elif regime_name == "global":
                    regime = Global()
                elif regime_name == "local":
                    regime = Local(r)
                else:
                    raise ValueError(f"unknown regime {regime_name!r}")
                cell_cfg = SimConfig(
                    max_generations=cfg.max_generations,
                    population_cap=cfg.population_cap,
                    per_type_individual_threshold=cfg.per_type_individual_threshold,
                    seed=_cell_seed(cfg.seed, cell_index, regime_index),
                    cohort_cap=cfg.cohort_cap,
                )
                est = estimate_survival(
                    regime, law, family, cell_cfg, trials, backend=backend
                )
                mc_row["trials"] = est.trials
                mc_row["survivals"] = est.survivals
                mc_row["p_hat"] = est.p_hat
                mc_row["ci_lo"] = est.ci_lo
                mc_row["ci_hi"] = est.ci_hi
            except (ValueError, ArithmeticError) as exc:
                mc_row["status"] = str(exc).replace(",", ";")
            yield mc_row

"""Pure-Python (numpy) trial kernels.

Fallback for the compiled extension.  Both backends consume the generator's
bit stream through the same sequence of distribution calls, so trial results
are bit-identical between them:

per generation, in ascending type order --
  1. total children per cohort (fused Poisson / negative binomial, or
     per-parent draws below the aggregation threshold),
  2. mutant count per cohort (binomial),
  3. one fresh mean per mutant.
"""

from __future__ import annotations

import numpy as np

from .laws import (
    FAMILY_POISSON,
    LAW_CONSTANT,
    LAW_TWO_POINT,
    LAW_UNIFORM,
)

BACKEND_NAME = "python"

# trial status codes shared with the compiled kernels
STATUS_EXTINCT = 0
STATUS_SURVIVED_TO_CAP = 1
STATUS_POPULATION_CAP_HIT = 2


def _draw_mean(rng, law_code, q0, q1, q2):
    if law_code == LAW_UNIFORM:
        return rng.uniform(0.0, q0)
    if law_code == LAW_CONSTANT:
        return q0
    return q0 if rng.random() < q2 else q1


def _draw_means(rng, law_code, q0, q1, q2, size):
    if law_code == LAW_UNIFORM:
        return rng.uniform(0.0, q0, size)
    if law_code == LAW_CONSTANT:
        return np.full(size, q0)
    u = rng.random(size)
    return np.where(u < q2, q0, q1)


def _draw_total(rng, family_code, m, n, tpp):
    # scalar path, used when the per-parent threshold is active
    if n == 0:
        return 0
    if family_code == FAMILY_POISSON:
        if n < tpp:
            return int(rng.poisson(m, size=n).sum())
        return int(rng.poisson(n * m))
    p = 1.0 / (1.0 + m)
    if n < tpp:
        return int((rng.geometric(p, size=n) - 1).sum())
    return int(rng.negative_binomial(n, p))


def local_generation(rng, ids, means, counts, next_id, law, family_code, r, tpp):
    """Advance the cohort arrays by one generation.

    Returns ``(ids, means, counts, next_id, mutant_parent_ids, population)``.
    Cohort arrays stay sorted by type id; mutants get consecutive new ids in
    (parent order, draw order).
    """
    law_code, q0, q1, q2 = law
    if tpp <= 1:
        if family_code == FAMILY_POISSON:
            totals = rng.poisson(counts * means)
        else:
            totals = rng.negative_binomial(counts, 1.0 / (1.0 + means))
        totals = totals.astype(np.int64, copy=False)
    else:
        totals = np.array(
            [_draw_total(rng, family_code, m, int(n), tpp) for m, n in zip(means, counts)],
            dtype=np.int64,
        )
    mutants = rng.binomial(totals, r).astype(np.int64, copy=False)
    survivors = totals - mutants
    n_mut = int(mutants.sum())
    new_means = _draw_means(rng, law_code, q0, q1, q2, n_mut)

    mutant_parents = np.repeat(ids, mutants)
    new_ids = np.arange(next_id, next_id + n_mut, dtype=np.int64)
    keep = survivors > 0
    ids = np.concatenate([ids[keep], new_ids])
    means = np.concatenate([means[keep], new_means])
    counts = np.concatenate([survivors[keep], np.ones(n_mut, dtype=np.int64)])
    population = int(survivors.sum()) + n_mut
    return ids, means, counts, next_id + n_mut, mutant_parents, population


def run_fixed_trial(rng, family_code, m, max_generations, population_cap, tpp):
    z = 1
    peak = 1
    status = STATUS_SURVIVED_TO_CAP
    at_gen = max_generations
    for gen in range(1, max_generations + 1):
        z = _draw_total(rng, family_code, m, z, tpp)
        peak = max(peak, z)
        if z == 0:
            status, at_gen = STATUS_EXTINCT, gen
            break
        if z >= population_cap:
            status, at_gen = STATUS_POPULATION_CAP_HIT, gen
            break
    return status, at_gen, z, peak


def run_global_trial(rng, law, family_code, max_generations, population_cap, tpp):
    law_code, q0, q1, q2 = law
    z = 1
    peak = 1
    status = STATUS_SURVIVED_TO_CAP
    at_gen = max_generations
    for gen in range(1, max_generations + 1):
        m = _draw_mean(rng, law_code, q0, q1, q2)
        z = _draw_total(rng, family_code, m, z, tpp)
        peak = max(peak, z)
        if z == 0:
            status, at_gen = STATUS_EXTINCT, gen
            break
        if z >= population_cap:
            status, at_gen = STATUS_POPULATION_CAP_HIT, gen
            break
    return status, at_gen, z, peak


def run_local_trial(
    rng,
    law,
    family_code,
    r,
    max_generations,
    population_cap,
    cohort_cap,
    tpp,
    record_tree,
):
    law_code, q0, q1, q2 = law
    m1 = _draw_mean(rng, law_code, q0, q1, q2)
    ids = np.array([1], dtype=np.int64)
    means = np.array([m1], dtype=np.float64)
    counts = np.array([1], dtype=np.int64)
    next_id = 2
    parents = [0]
    birth_gens = [0]

    population = 1
    peak = 1
    max_cohort_peak = 1
    cohort_cap_hit = False
    status = STATUS_SURVIVED_TO_CAP
    at_gen = max_generations

    for gen in range(1, max_generations + 1):
        ids, means, counts, next_id, mutant_parents, population = local_generation(
            rng, ids, means, counts, next_id, law, family_code, r, tpp
        )
        parents.extend(mutant_parents.tolist())
        birth_gens.extend([gen] * mutant_parents.size)
        peak = max(peak, population)
        cur_max_cohort = int(counts.max()) if counts.size else 0
        max_cohort_peak = max(max_cohort_peak, cur_max_cohort)
        if population == 0:
            status, at_gen = STATUS_EXTINCT, gen
            break
        if population >= population_cap:
            status, at_gen = STATUS_POPULATION_CAP_HIT, gen
            break
        if cohort_cap > 0 and cur_max_cohort >= cohort_cap:
            status, at_gen = STATUS_POPULATION_CAP_HIT, gen
            cohort_cap_hit = True
            break

    tree_count = next_id - 1
    if record_tree:
        parents_arr = np.asarray(parents, dtype=np.int64)
        births_arr = np.asarray(birth_gens, dtype=np.int64)
        alive_ids = ids.copy()
    else:
        parents_arr = births_arr = alive_ids = None
    return (
        status,
        at_gen,
        population,
        peak,
        tree_count,
        max_cohort_peak,
        int(ids.size),
        cohort_cap_hit,
        parents_arr,
        births_arr,
        alive_ids,
    )


def run_subtree_trial(rng, law, family_code, r, subtree_cap, tpp):
    """Tally mutant (x) and same-type (x1) births over the type-1 subtree."""
    law_code, q0, q1, q2 = law
    m1 = _draw_mean(rng, law_code, q0, q1, q2)
    n = 1
    x = 0
    x1 = 0
    censored = False
    while n > 0:
        total = _draw_total(rng, family_code, m1, n, tpp)
        mut = int(rng.binomial(total, r))
        x += mut
        x1 += total - mut
        if x + x1 > subtree_cap:
            censored = True
            break
        n = total - mut
    return x, x1, censored

# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled trial kernels.

Hot loops of the Monte Carlo simulator: whole trials run in C with scalar
draws against numpy's C distribution functions.  The draw sequence matches
the numpy fallback in ``_kernels_py`` call for call, so both backends give
bit-identical trials for the same generator state.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.stdint cimport int64_t
from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memset
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    binomial_t,
    random_binomial,
    random_geometric,
    random_negative_binomial,
    random_poisson,
    random_standard_uniform,
    random_uniform,
)

cnp.import_array()

BACKEND_NAME = "compiled"

STATUS_EXTINCT = 0
STATUS_SURVIVED_TO_CAP = 1
STATUS_POPULATION_CAP_HIT = 2

DEF LAW_UNIFORM = 0
DEF LAW_CONSTANT = 1
DEF LAW_TWO_POINT = 2
DEF FAMILY_POISSON = 0


cdef bitgen_t *_bitgen(object rng) except NULL:
    capsule = rng.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("rng does not expose a BitGenerator capsule")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


cdef inline double draw_mean(bitgen_t *bg, int law_code, double q0, double q1,
                             double q2) nogil:
    if law_code == LAW_UNIFORM:
        return random_uniform(bg, 0.0, q0)
    if law_code == LAW_CONSTANT:
        return q0
    if random_standard_uniform(bg) < q2:
        return q0
    return q1


cdef inline int64_t draw_total(bitgen_t *bg, int family_code, double m,
                               int64_t n, int64_t tpp) nogil:
    cdef int64_t s, i
    cdef double p
    if n == 0:
        return 0
    if family_code == FAMILY_POISSON:
        if n < tpp:
            s = 0
            for i in range(n):
                s += random_poisson(bg, m)
            return s
        return random_poisson(bg, (<double> n) * m)
    p = 1.0 / (1.0 + m)
    if n < tpp:
        s = 0
        for i in range(n):
            s += random_geometric(bg, p) - 1
        return s
    return random_negative_binomial(bg, <double> n, p)


def run_fixed_trial(object rng, int family_code, double m,
                    long long max_generations, long long population_cap,
                    long long tpp):
    cdef bitgen_t *bg = _bitgen(rng)
    cdef int64_t z = 1, peak = 1, gen = 0
    cdef int64_t cap = population_cap, horizon = max_generations, thr = tpp
    cdef int status = STATUS_SURVIVED_TO_CAP
    cdef int64_t at_gen = horizon
    with rng.bit_generator.lock:
        for gen in range(1, horizon + 1):
            z = draw_total(bg, family_code, m, z, thr)
            if z > peak:
                peak = z
            if z == 0:
                status = STATUS_EXTINCT
                at_gen = gen
                break
            if z >= cap:
                status = STATUS_POPULATION_CAP_HIT
                at_gen = gen
                break
    return status, int(at_gen), int(z), int(peak)


def run_global_trial(object rng, tuple law, int family_code,
                     long long max_generations, long long population_cap,
                     long long tpp):
    cdef int law_code = law[0]
    cdef double q0 = law[1], q1 = law[2], q2 = law[3]
    cdef bitgen_t *bg = _bitgen(rng)
    cdef int64_t z = 1, peak = 1, gen = 0
    cdef int64_t cap = population_cap, horizon = max_generations, thr = tpp
    cdef double m
    cdef int status = STATUS_SURVIVED_TO_CAP
    cdef int64_t at_gen = horizon
    with rng.bit_generator.lock:
        for gen in range(1, horizon + 1):
            m = draw_mean(bg, law_code, q0, q1, q2)
            z = draw_total(bg, family_code, m, z, thr)
            if z > peak:
                peak = z
            if z == 0:
                status = STATUS_EXTINCT
                at_gen = gen
                break
            if z >= cap:
                status = STATUS_POPULATION_CAP_HIT
                at_gen = gen
                break
    return status, int(at_gen), int(z), int(peak)


cdef inline int _grow(void **buf, int64_t *capacity, int64_t needed,
                      size_t itemsize) except -1:
    cdef int64_t cap = capacity[0]
    cdef void *p
    if needed <= cap:
        return 0
    while cap < needed:
        cap *= 2
    p = realloc(buf[0], cap * itemsize)
    if p == NULL:
        raise MemoryError()
    buf[0] = p
    capacity[0] = cap
    return 0


def run_local_trial(object rng, tuple law, int family_code, double r,
                    long long max_generations, long long population_cap,
                    long long cohort_cap, long long tpp, bint record_tree):
    cdef int law_code = law[0]
    cdef double q0 = law[1], q1 = law[2], q2 = law[3]
    cdef bitgen_t *bg = _bitgen(rng)
    cdef binomial_t binom
    memset(&binom, 0, sizeof(binom))

    cdef int64_t ids_cap = 64, means_cap = 64, counts_cap = 64
    cdef int64_t totals_cap = 64, muts_cap = 64, mean_cap = 64
    cdef int64_t par_cap = 64, bir_cap = 64
    cdef int64_t *ids = <int64_t *> malloc(ids_cap * sizeof(int64_t))
    cdef double *means = <double *> malloc(means_cap * sizeof(double))
    cdef int64_t *counts = <int64_t *> malloc(counts_cap * sizeof(int64_t))
    cdef int64_t *totals = <int64_t *> malloc(totals_cap * sizeof(int64_t))
    cdef int64_t *muts = <int64_t *> malloc(muts_cap * sizeof(int64_t))
    cdef double *newmeans = <double *> malloc(mean_cap * sizeof(double))
    cdef int64_t *parents = <int64_t *> malloc(par_cap * sizeof(int64_t))
    cdef int64_t *births = <int64_t *> malloc(bir_cap * sizeof(int64_t))
    if (ids == NULL or means == NULL or counts == NULL or totals == NULL or
            muts == NULL or newmeans == NULL or parents == NULL or births == NULL):
        free(ids); free(means); free(counts); free(totals)
        free(muts); free(newmeans); free(parents); free(births)
        raise MemoryError()

    cdef int64_t ncoh, tree_len, next_id, gen
    cdef int64_t horizon = max_generations, pop_cap = population_cap
    cdef int64_t coh_stop = cohort_cap, thr = tpp
    cdef int64_t i, j, k, w, s, n_mut, surv_pop, population, cur_max
    cdef int64_t peak, max_cohort_peak, at_gen
    cdef int status, cc_hit
    cdef cnp.ndarray parr, barr, aarr

    try:
        with rng.bit_generator.lock:
            means[0] = draw_mean(bg, law_code, q0, q1, q2)
            ids[0] = 1
            counts[0] = 1
            ncoh = 1
            parents[0] = 0
            births[0] = 0
            tree_len = 1
            next_id = 2
            population = 1
            peak = 1
            max_cohort_peak = 1
            cc_hit = 0
            status = STATUS_SURVIVED_TO_CAP
            at_gen = horizon

            for gen in range(1, horizon + 1):
                _grow(<void **> &totals, &totals_cap, ncoh, sizeof(int64_t))
                _grow(<void **> &muts, &muts_cap, ncoh, sizeof(int64_t))
                n_mut = 0
                surv_pop = 0
                for i in range(ncoh):
                    totals[i] = draw_total(bg, family_code, means[i], counts[i], thr)
                for i in range(ncoh):
                    muts[i] = random_binomial(bg, r, totals[i], &binom)
                    n_mut += muts[i]
                    surv_pop += totals[i] - muts[i]

                _grow(<void **> &newmeans, &mean_cap, n_mut, sizeof(double))
                _grow(<void **> &parents, &par_cap, tree_len + n_mut, sizeof(int64_t))
                _grow(<void **> &births, &bir_cap, tree_len + n_mut, sizeof(int64_t))
                k = 0
                for i in range(ncoh):
                    for j in range(muts[i]):
                        newmeans[k] = draw_mean(bg, law_code, q0, q1, q2)
                        parents[tree_len] = ids[i]
                        births[tree_len] = gen
                        tree_len += 1
                        k += 1

                # compact surviving cohorts in place, then append the mutants
                w = 0
                cur_max = 0
                for i in range(ncoh):
                    s = totals[i] - muts[i]
                    if s > 0:
                        ids[w] = ids[i]
                        means[w] = means[i]
                        counts[w] = s
                        if s > cur_max:
                            cur_max = s
                        w += 1
                _grow(<void **> &ids, &ids_cap, w + n_mut, sizeof(int64_t))
                _grow(<void **> &means, &means_cap, w + n_mut, sizeof(double))
                _grow(<void **> &counts, &counts_cap, w + n_mut, sizeof(int64_t))
                for k in range(n_mut):
                    ids[w] = next_id
                    means[w] = newmeans[k]
                    counts[w] = 1
                    next_id += 1
                    w += 1
                ncoh = w
                if n_mut > 0 and cur_max < 1:
                    cur_max = 1
                population = surv_pop + n_mut
                if population > peak:
                    peak = population
                if cur_max > max_cohort_peak:
                    max_cohort_peak = cur_max
                if population == 0:
                    status = STATUS_EXTINCT
                    at_gen = gen
                    break
                if population >= pop_cap:
                    status = STATUS_POPULATION_CAP_HIT
                    at_gen = gen
                    break
                if coh_stop > 0 and cur_max >= coh_stop:
                    status = STATUS_POPULATION_CAP_HIT
                    at_gen = gen
                    cc_hit = 1
                    break

        if record_tree:
            parr = np.empty(tree_len, dtype=np.int64)
            barr = np.empty(tree_len, dtype=np.int64)
            aarr = np.empty(ncoh, dtype=np.int64)
            for i in range(tree_len):
                (<int64_t *> cnp.PyArray_DATA(parr))[i] = parents[i]
                (<int64_t *> cnp.PyArray_DATA(barr))[i] = births[i]
            for i in range(ncoh):
                (<int64_t *> cnp.PyArray_DATA(aarr))[i] = ids[i]
            tree_out = (parr, barr, aarr)
        else:
            tree_out = (None, None, None)
    finally:
        free(ids); free(means); free(counts); free(totals)
        free(muts); free(newmeans); free(parents); free(births)

    return (
        status,
        int(at_gen),
        int(population),
        int(peak),
        int(tree_len),
        int(max_cohort_peak),
        int(ncoh),
        bool(cc_hit),
        tree_out[0],
        tree_out[1],
        tree_out[2],
    )


def run_subtree_trial(object rng, tuple law, int family_code, double r,
                      long long subtree_cap, long long tpp):
    cdef int law_code = law[0]
    cdef double q0 = law[1], q1 = law[2], q2 = law[3]
    cdef bitgen_t *bg = _bitgen(rng)
    cdef binomial_t binom
    memset(&binom, 0, sizeof(binom))
    cdef double m1
    cdef int64_t n = 1, x = 0, x1 = 0, total, mut
    cdef int64_t cap = subtree_cap, thr = tpp
    cdef int censored = 0
    with rng.bit_generator.lock:
        m1 = draw_mean(bg, law_code, q0, q1, q2)
        while n > 0:
            total = draw_total(bg, family_code, m1, n, thr)
            mut = random_binomial(bg, r, total, &binom)
            x += mut
            x1 += total - mut
            if x + x1 > cap:
                censored = 1
                break
            n = total - mut
    return int(x), int(x1), bool(censored)

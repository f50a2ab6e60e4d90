"""Independent numerical oracles used by the tests.

These deliberately avoid the package's own quadrature and closed forms:
Riemann/midpoint refinement (with optional Richardson extrapolation), a
fixed-point iteration for the Poisson extinction probability, and simple
histogram-based two-sample statistics.
"""

import math

import numpy as np
from scipy import stats


def romberg_midpoint(f, a, b, levels=14):
    """Composite-midpoint sums on halved grids with Richardson extrapolation.

    ``f`` must accept a numpy array.  Good to ~1e-12 on smooth integrands.
    """
    table = []
    n = 1
    for k in range(levels):
        h = (b - a) / n
        xs = a + h * (np.arange(n) + 0.5)
        row = [h * float(np.sum(f(xs)))]
        for j in range(k):
            row.append(row[j] + (row[j] - table[k - 1][j]) / (4 ** (j + 1) - 1))
        table.append(row)
        n *= 2
    return table[-1][-1]


def riemann_refine(f, a, b, tol=1e-6, max_levels=22):
    """Plain midpoint-rule refinement until successive halvings agree.

    No extrapolation, so it also converges (slowly) for integrable endpoint
    singularities such as ln m at zero.
    """
    prev = None
    n = 64
    for _ in range(max_levels):
        h = (b - a) / n
        xs = a + h * (np.arange(n) + 0.5)
        cur = h * float(np.sum(f(xs)))
        if prev is not None and abs(cur - prev) < tol:
            return cur
        prev = cur
        n *= 2
    return prev


def poisson_extinction_probability(m, iterations=100000, tol=1e-14):
    """Smallest fixed point of q = exp(m (q - 1))."""
    q = 0.0
    for _ in range(iterations):
        nxt = math.exp(m * (q - 1.0))
        if abs(nxt - q) < tol:
            return nxt
        q = nxt
    return q


def geometric_series_ex(m, r, terms=100000):
    """Partial-sum oracle for r * m / (1 - m (1 - r)): r * sum_k m (b m)^k."""
    b = 1.0 - r
    total = 0.0
    term = m
    for _ in range(terms):
        total += term
        term *= b * m
        if term < 1e-18 * max(total, 1.0):
            break
    return r * total


def two_sample_chi2_pvalue(x, y, min_expected=5):
    """Chi-square homogeneity test for two integer samples, pooling sparse
    tail bins so every expected count is at least ``min_expected``."""
    x = np.asarray(x)
    y = np.asarray(y)
    hi = int(max(x.max(), y.max()))
    cx = np.bincount(x, minlength=hi + 1).astype(float)
    cy = np.bincount(y, minlength=hi + 1).astype(float)
    # pool from the right until all pooled expected counts are big enough
    bins_x, bins_y = [], []
    acc_x = acc_y = 0.0
    total = cx.sum() + cy.sum()
    for k in range(hi + 1):
        acc_x += cx[k]
        acc_y += cy[k]
        if (acc_x + acc_y) * min(cx.sum(), cy.sum()) / total >= min_expected:
            bins_x.append(acc_x)
            bins_y.append(acc_y)
            acc_x = acc_y = 0.0
    if acc_x + acc_y > 0:
        if bins_x:
            bins_x[-1] += acc_x
            bins_y[-1] += acc_y
        else:
            bins_x.append(acc_x)
            bins_y.append(acc_y)
    table = np.array([bins_x, bins_y])
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] < 2:
        return 1.0
    _, p, _, _ = stats.chi2_contingency(table)
    return p


def chi2_gof_pvalue(sample, pmf, min_expected=5):
    """Chi-square goodness of fit of an integer sample against an exact pmf
    callable, pooling the tail."""
    sample = np.asarray(sample)
    n = sample.size
    hi = int(sample.max())
    observed = np.bincount(sample, minlength=hi + 1).astype(float)
    expected = np.array([pmf(k) * n for k in range(hi + 1)])
    expected = np.append(expected, max(0.0, n - expected.sum()))
    observed = np.append(observed, 0.0)
    # pool sparse bins from the right
    while expected.size > 2 and expected[-1] < min_expected:
        expected[-2] += expected[-1]
        observed[-2] += observed[-1]
        expected = expected[:-1]
        observed = observed[:-1]
    expected *= observed.sum() / expected.sum()
    chi2 = float(np.sum((observed - expected) ** 2 / expected))
    dof = expected.size - 1
    return float(stats.chi2.sf(chi2, dof))

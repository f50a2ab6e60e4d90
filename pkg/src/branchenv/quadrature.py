"""Adaptive Simpson quadrature with handling for a log endpoint singularity."""

from __future__ import annotations

import math
from typing import Callable

DEFAULT_TOL = 1e-12
DEFAULT_MAX_DEPTH = 60


def _simpson(a: float, fa: float, fm: float, fb: float, b: float) -> float:
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adapt(f, a, fa, m, fm, b, fb, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(a, fa, flm, fm, m)
    right = _simpson(m, fm, frm, fb, b)
    err = left + right - whole
    if depth <= 0 or abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    return _adapt(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) + _adapt(
        f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1
    )


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> float:
    """Integrate ``f`` on ``[a, b]`` to absolute tolerance ``tol``.

    The integrand must be finite on the closed interval; singular endpoints
    have to be split off analytically first (see
    :func:`integrate_with_log_endpoint`).
    """
    if a == b:
        return 0.0
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = _simpson(a, fa, fm, fb, b)
    return _adapt(f, a, fa, m, fm, b, fb, whole, tol, max_depth)


def neg_log_head(h: float) -> float:
    """Exact ``integral of -ln(m) over [0, h]`` for ``0 < h``."""
    return h * (1.0 - math.log(h))


def integrate_with_log_endpoint(
    f: Callable[[float], float],
    smooth_part: Callable[[float], float],
    upper: float,
    tol: float = DEFAULT_TOL,
    breakpoints: tuple[float, ...] = (),
) -> float:
    """Integrate ``f(m) = -ln(m) + smooth_part(m)`` on ``(0, upper]``.

    Near zero the integrable ``-ln m`` singularity is handled by its analytic
    antiderivative on a short head interval; ``smooth_part`` must be finite
    at 0 (defined by its limit).  ``breakpoints`` are interior points where
    ``f`` has a kink, e.g. m = 1 for ``|ln m|``.
    """
    h = min(1e-6, 0.5 * upper)
    total = neg_log_head(h) + adaptive_simpson(smooth_part, 0.0, h, tol)
    knots = sorted({h, upper, *(x for x in breakpoints if h < x < upper)})
    for lo, hi in zip(knots[:-1], knots[1:]):
        total += adaptive_simpson(f, lo, hi, tol)
    return total

"""Adaptive Simpson quadrature against exact values and a midpoint-rule
refinement oracle."""

import math

import numpy as np
import pytest

from branchenv.quadrature import (
    adaptive_simpson,
    integrate_with_log_endpoint,
    neg_log_head,
)

from .oracles import riemann_refine, romberg_midpoint


def test_polynomial_exact():
    # Simpson is exact on cubics even before refinement
    assert adaptive_simpson(lambda x: x**3 - 2 * x + 1, 0.0, 2.0) == pytest.approx(
        2.0, abs=1e-13
    )


def test_sin_integral():
    assert adaptive_simpson(math.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-12)


def test_exp_integral_matches_romberg_oracle():
    f = lambda x: math.exp(-x) * x
    exact = 1.0 - 2.0 * math.exp(-1.0)  # ∫₀¹ x e^{-x} dx
    ours = adaptive_simpson(f, 0.0, 1.0)
    oracle = romberg_midpoint(lambda x: np.exp(-x) * x, 0.0, 1.0)
    assert ours == pytest.approx(exact, abs=1e-12)
    assert oracle == pytest.approx(exact, abs=1e-11)


def test_empty_interval():
    assert adaptive_simpson(math.sin, 1.0, 1.0) == 0.0


def test_neg_log_head_closed_form():
    for h in (1e-6, 1e-3, 0.25):
        # ∫₀^h (-ln m) dm = h (1 - ln h)
        assert neg_log_head(h) == pytest.approx(h * (1.0 - math.log(h)), rel=1e-14)


def test_log_endpoint_unit_interval():
    # ∫₀¹ |ln m| dm = 1, with the singular endpoint handled analytically
    value = integrate_with_log_endpoint(
        lambda m: abs(math.log(m)), lambda m: 0.0, 1.0
    )
    assert value == pytest.approx(1.0, abs=1e-9)
    # slow-but-sure midpoint refinement oracle
    oracle = riemann_refine(lambda m: np.abs(np.log(m)), 0.0, 1.0, tol=1e-6)
    assert value == pytest.approx(oracle, abs=1e-4)


def test_log_endpoint_with_breakpoint():
    # ∫₀² |ln m| dm = 2 ln 2, kink at m = 1 declared as a breakpoint
    value = integrate_with_log_endpoint(
        lambda m: abs(math.log(m)), lambda m: 0.0, 2.0, breakpoints=(1.0,)
    )
    assert value == pytest.approx(2.0 * math.log(2.0), abs=1e-9)


def test_log_endpoint_smooth_part():
    # ∫₀¹ (-ln m + m) dm = 1 + 1/2
    value = integrate_with_log_endpoint(
        lambda m: -math.log(m) + m, lambda m: m, 1.0
    )
    assert value == pytest.approx(1.5, abs=1e-9)

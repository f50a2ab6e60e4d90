"""Closed forms and criteria: moments of the mean law, the survival
classification in a globally changing environment, the mean offspring of the
tree of types, the local-regime trichotomy and the critical mutation
probability for the uniform mean law."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .laws import MeanLaw, OffspringFamily
from .quadrature import DEFAULT_TOL, adaptive_simpson, integrate_with_log_endpoint

INF = math.inf


class GlobalVerdict(Enum):
    DIES_OUT = "DiesOut"
    SURVIVES = "Survives"
    INDETERMINATE = "IndeterminateMomentCondition"

    def __str__(self):
        return self.value


class RegimeLabel(Enum):
    DIES_OUT = "DiesOut"
    SURVIVES_TYPES_TRANSIENT = "SurvivesTypesTransient"
    FIXED_TYPE_SURVIVES = "FixedTypeSurvives"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class GlobalClass:
    """Verdict for the globally changing environment, with the moments
    backing it."""

    verdict: GlobalVerdict
    e_log_m: float
    e_abs_log_m: float
    e_abs_log_one_minus_p0: float


@dataclass(frozen=True)
class RegimeClass:
    """Trichotomy label for the locally changing environment."""

    label: RegimeLabel
    expected_x: float


@dataclass(frozen=True)
class CriticalThreshold:
    r_c: float
    bracket_lo: float
    bracket_hi: float
    residual: float


class BracketFailureError(ValueError):
    """No sign change across the bisection bracket."""

    def __init__(self, lo, f_lo, hi, f_hi):
        self.lo, self.f_lo, self.hi, self.f_hi = lo, f_lo, hi, f_hi
        super().__init__(
            f"no sign change on bracket: f({lo!r})={f_lo!r}, f({hi!r})={f_hi!r}"
        )


def expect_mean(law: MeanLaw) -> float:
    """E(M) in closed form."""
    if law.kind == "uniform":
        return 0.5 * law.a
    if law.kind == "constant":
        return law.m1
    return law.p * law.m1 + (1.0 - law.p) * law.m2


def expect_log_mean(law: MeanLaw) -> float:
    """E(ln M); -inf when mu has an atom at zero."""
    if law.kind == "uniform":
        return math.log(law.a) - 1.0
    if law.has_atom_at_zero:
        return -INF
    if law.kind == "constant":
        return math.log(law.m1)
    total = 0.0
    if law.p > 0.0:
        total += law.p * math.log(law.m1)
    if law.p < 1.0:
        total += (1.0 - law.p) * math.log(law.m2)
    return total


def expect_abs_log_mean(law: MeanLaw) -> float:
    """E|ln M|; +inf when mu has an atom at zero.

    For the uniform variant this is evaluated by adaptive quadrature with the
    log endpoint singularity split off analytically."""
    if law.kind == "uniform":
        a = law.a
        integral = integrate_with_log_endpoint(
            lambda m: abs(math.log(m)),
            lambda m: 0.0,
            a,
            breakpoints=(1.0,),
        )
        return integral / a
    if law.has_atom_at_zero:
        return INF
    if law.kind == "constant":
        return abs(math.log(law.m1))
    total = 0.0
    if law.p > 0.0:
        total += law.p * abs(math.log(law.m1))
    if law.p < 1.0:
        total += (1.0 - law.p) * abs(math.log(law.m2))
    return total


def expect_abs_log_survival_terms(
    law: MeanLaw, family: OffspringFamily
) -> tuple[float, float]:
    """(E|ln M|, E|ln(1 - P0)|) for the Smith-Wilkinson moment conditions.

    1 - P0 is the per-environment probability of at least one child, so the
    second integrand is -ln(1 - p0(m)); it diverges like -ln m at zero for
    both families, which the quadrature handles on a head interval."""
    e_abs_log_m = expect_abs_log_mean(law)

    def abs_log_one_minus_p0(m: float) -> float:
        return abs(math.log1p(-family.p0(m)))

    if law.kind == "uniform":
        a = law.a
        if family is OffspringFamily.POISSON:
            # -ln(1-e^{-m}) = -ln m - ln((1-e^{-m})/m); the second term -> 0
            def smooth(m: float) -> float:
                if m == 0.0:
                    return 0.0
                return -math.log(-math.expm1(-m) / m)

        else:
            # -ln(m/(1+m)) = -ln m + ln(1+m)
            def smooth(m: float) -> float:
                return math.log1p(m)

        integral = integrate_with_log_endpoint(abs_log_one_minus_p0, smooth, a)
        return e_abs_log_m, integral / a

    # atoms: direct evaluation; an atom at zero has p0 = 1 and the term blows up
    if law.has_atom_at_zero:
        return e_abs_log_m, INF
    if law.kind == "constant":
        return e_abs_log_m, abs_log_one_minus_p0(law.m1)
    total = 0.0
    if law.p > 0.0:
        total += law.p * abs_log_one_minus_p0(law.m1)
    if law.p < 1.0:
        total += (1.0 - law.p) * abs_log_one_minus_p0(law.m2)
    return e_abs_log_m, total


def classify_global(law: MeanLaw, family: OffspringFamily) -> GlobalClass:
    """Smith-Wilkinson classification: dies out when E(ln M) <= 0, survives
    when E(ln M) > 0 and E|ln(1-P0)| < inf, indeterminate when a required
    moment is infinite."""
    e_log = expect_log_mean(law)
    e_abs_log_m, e_abs_log_p0 = expect_abs_log_survival_terms(law, family)
    if e_log <= 0.0:
        verdict = GlobalVerdict.DIES_OUT if e_abs_log_m < INF else GlobalVerdict.INDETERMINATE
    else:
        if e_abs_log_m < INF and e_abs_log_p0 < INF:
            verdict = GlobalVerdict.SURVIVES
        else:
            verdict = GlobalVerdict.INDETERMINATE
    return GlobalClass(verdict, e_log, e_abs_log_m, e_abs_log_p0)


def jensen_gap(law: MeanLaw) -> float:
    """ln E(M) - E(ln M); zero only for a point mass."""
    em = expect_mean(law)
    if em <= 0.0:
        raise ValueError("undefined-gap: E(M) = 0")
    return math.log(em) - expect_log_mean(law)


def _ex_given_mean(m: float, r: float, b: float) -> float:
    # r * m / (1 - m(1-r)) for one atom of mu
    if m == 0.0:
        return 0.0
    return r * m / (1.0 - b * m)


def expected_tree_offspring(law: MeanLaw, r: float) -> float:
    """E(X), the mean offspring per vertex of the tree of types.

    Equals r E[M / (1 - M(1-r))] with M ~ mu; +inf as soon as mu puts mass at
    or above 1/(1-r) (the per-type progeny series diverges), including the
    uniform boundary a(1-r) = 1 where the integral diverges logarithmically.
    """
    if not 0.0 < r <= 1.0:
        raise ValueError("invalid-r: mutation probability must be in (0, 1]")
    b = 1.0 - r
    if b == 0.0:
        return expect_mean(law)
    threshold = 1.0 / b
    if law.mass_above(threshold) > 0.0 or law.atom_weight(threshold) > 0.0:
        return INF
    if law.kind == "uniform":
        ab = law.a * b
        if ab >= 1.0:
            return INF
        return r * (-1.0 / b - math.log1p(-ab) / (law.a * b * b))
    if law.kind == "constant":
        return _ex_given_mean(law.m1, r, b)
    return law.p * _ex_given_mean(law.m1, r, b) + (1.0 - law.p) * _ex_given_mean(
        law.m2, r, b
    )


def expected_tree_offspring_quadrature(
    law: MeanLaw, r: float, tol: float = DEFAULT_TOL
) -> float:
    """Same quantity as :func:`expected_tree_offspring` but through adaptive
    quadrature (atom variants reduce to the weighted sum); kept as the
    independent cross-check route."""
    if not 0.0 < r <= 1.0:
        raise ValueError("invalid-r: mutation probability must be in (0, 1]")
    b = 1.0 - r
    if b == 0.0:
        return expect_mean(law)
    threshold = 1.0 / b
    if law.mass_above(threshold) > 0.0 or law.atom_weight(threshold) > 0.0:
        return INF
    if law.kind == "uniform":
        a = law.a
        if a * b >= 1.0:
            return INF
        integral = adaptive_simpson(lambda m: m / (1.0 - b * m), 0.0, a, tol)
        return r * integral / a
    if law.kind == "constant":
        return _ex_given_mean(law.m1, r, b)
    return law.p * _ex_given_mean(law.m1, r, b) + (1.0 - law.p) * _ex_given_mean(
        law.m2, r, b
    )


def classify_local(law: MeanLaw, r: float) -> RegimeClass:
    """Trichotomy of the locally changing environment: dies out when
    E(X) <= 1, survives with every type transient when 1 < E(X) < inf, and a
    fixed type can survive when E(X) = inf."""
    ex = expected_tree_offspring(law, r)
    if ex <= 1.0:
        label = RegimeLabel.DIES_OUT
    elif ex < INF:
        label = RegimeLabel.SURVIVES_TYPES_TRANSIENT
    else:
        label = RegimeLabel.FIXED_TYPE_SURVIVES
    return RegimeClass(label, ex)


def critical_r_uniform(
    a: float, tol: float = 1e-9, max_iter: int = 200
) -> CriticalThreshold:
    """Bisect r -> E(X) - 1 for the uniform mean law on the bracket
    (1 - 1/a, 1); requires 1 < a < 2 so both endpoints have definite sign."""
    if not 1.0 < a < 2.0:
        raise ValueError("critical threshold bracket requires 1 < a < 2")
    law = MeanLaw.uniform(a)
    lo0 = 1.0 - 1.0 / a
    hi0 = 1.0

    def f(r: float) -> float:
        return expected_tree_offspring(law, r) - 1.0

    f_lo = f(lo0)  # +inf: a(1-r) = 1 at the left endpoint
    f_hi = f(hi0)  # a/2 - 1 < 0 for a < 2
    if not (f_lo > 0.0 and f_hi < 0.0):
        raise BracketFailureError(lo0, f_lo, hi0, f_hi)

    lo, hi = lo0, hi0
    mid = 0.5 * (lo + hi)
    residual = INF
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        residual = abs(fm)
        if residual <= tol:
            break
        if fm > 0.0:
            lo = mid
        else:
            hi = mid
    return CriticalThreshold(r_c=mid, bracket_lo=lo0, bracket_hi=hi0, residual=residual)

"""Mean laws and offspring families.

A :class:`MeanLaw` is the distribution of the random mean offspring drawn for
an environment (or a type).  An :class:`OffspringFamily` turns a mean ``m``
into an actual offspring-count distribution with exactly that mean.

Sampling functions take an explicit ``numpy.random.Generator``.  The scalar
and vectorised variants consume the underlying bit stream in the same order,
which is what makes the compiled and pure-Python simulation backends produce
bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

# wire codes shared with the compiled kernels
LAW_UNIFORM = 0
LAW_CONSTANT = 1
LAW_TWO_POINT = 2

FAMILY_POISSON = 0
FAMILY_GEOMETRIC = 1


@dataclass(frozen=True)
class MeanLaw:
    """Law of the random mean offspring.

    Supported variants:

    * ``uniform``:  uniform on ``[0, a]``
    * ``constant``: point mass at ``m1``
    * ``twopoint``: mass ``p`` at ``m1`` and ``1 - p`` at ``m2``
    """

    kind: str
    a: float = 0.0
    m1: float = 0.0
    m2: float = 0.0
    p: float = 0.0

    def __post_init__(self):
        if self.kind not in ("uniform", "constant", "twopoint"):
            raise ValueError(f"unknown mean-law kind {self.kind!r}")

    @staticmethod
    def uniform(a: float) -> "MeanLaw":
        if not a > 0:
            raise ValueError("uniform mean law requires a > 0")
        return MeanLaw("uniform", a=float(a))

    @staticmethod
    def constant(m: float) -> "MeanLaw":
        if m < 0:
            raise ValueError("constant mean law requires m >= 0")
        return MeanLaw("constant", m1=float(m))

    @staticmethod
    def two_point(m1: float, m2: float, p: float) -> "MeanLaw":
        if m1 < 0 or m2 < 0:
            raise ValueError("two-point mean law requires nonnegative atoms")
        if not 0.0 <= p <= 1.0:
            raise ValueError("two-point mean law requires 0 <= p <= 1")
        return MeanLaw("twopoint", m1=float(m1), m2=float(m2), p=float(p))

    # -- structure ---------------------------------------------------------

    def encode(self) -> tuple[int, float, float, float]:
        """(code, q0, q1, q2) as consumed by the simulation kernels."""
        if self.kind == "uniform":
            return LAW_UNIFORM, self.a, 0.0, 0.0
        if self.kind == "constant":
            return LAW_CONSTANT, self.m1, 0.0, 0.0
        return LAW_TWO_POINT, self.m1, self.m2, self.p

    @property
    def is_point_mass(self) -> bool:
        if self.kind == "constant":
            return True
        if self.kind == "twopoint":
            return self.p in (0.0, 1.0) or self.m1 == self.m2
        return False

    def atom_weight(self, x: float) -> float:
        """Probability mass sitting exactly at ``x``."""
        if self.kind == "uniform":
            return 0.0
        if self.kind == "constant":
            return 1.0 if self.m1 == x else 0.0
        w = 0.0
        if self.m1 == x:
            w += self.p
        if self.m2 == x:
            w += 1.0 - self.p
        return w

    @property
    def has_atom_at_zero(self) -> bool:
        return self.atom_weight(0.0) > 0.0

    def mass_above(self, threshold: float) -> float:
        """mu({m : m > threshold}), exact per variant."""
        if self.kind == "uniform":
            return max(0.0, min(1.0, (self.a - threshold) / self.a))
        if self.kind == "constant":
            return 1.0 if self.m1 > threshold else 0.0
        w = 0.0
        if self.m1 > threshold:
            w += self.p
        if self.m2 > threshold:
            w += 1.0 - self.p
        return w

    # -- sampling ----------------------------------------------------------

    def sample(self, rng: np.random.Generator) -> float:
        if self.kind == "uniform":
            return rng.uniform(0.0, self.a)
        if self.kind == "constant":
            return self.m1
        return self.m1 if rng.random() < self.p else self.m2

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "uniform":
            return rng.uniform(0.0, self.a, size)
        if self.kind == "constant":
            return np.full(size, self.m1)
        u = rng.random(size)
        return np.where(u < self.p, self.m1, self.m2)

    def parameter_string(self) -> str:
        if self.kind == "uniform":
            return f"uniform:{self.a:g}"
        if self.kind == "constant":
            return f"constant:{self.m1:g}"
        return f"twopoint:{self.m1:g},{self.m2:g},{self.p:g}"


def parse_mean_law(text: str) -> MeanLaw:
    """Parse CLI syntax like ``uniform:1.5`` or ``twopoint:0,2,0.5``."""
    kind, _, params = text.partition(":")
    try:
        if kind == "uniform":
            return MeanLaw.uniform(float(params))
        if kind == "constant":
            return MeanLaw.constant(float(params))
        if kind == "twopoint":
            m1, m2, p = (float(x) for x in params.split(","))
            return MeanLaw.two_point(m1, m2, p)
    except ValueError as exc:
        raise ValueError(f"bad mean-law spec {text!r}: {exc}") from exc
    raise ValueError(f"bad mean-law spec {text!r}: unknown kind {kind!r}")


class OffspringFamily(Enum):
    """Offspring-count distributions indexed by their mean.

    * POISSON at mean m:   P(k) = exp(-m) m^k / k!
    * GEOMETRIC at mean m: P(k) = (1/(1+m)) (m/(1+m))^k, k >= 0
    """

    POISSON = "poisson"
    GEOMETRIC = "geometric"

    @property
    def code(self) -> int:
        return FAMILY_POISSON if self is OffspringFamily.POISSON else FAMILY_GEOMETRIC

    def p0(self, m: float) -> float:
        """Probability of no offspring at mean m."""
        if m < 0:
            raise ValueError("mean must be nonnegative")
        if self is OffspringFamily.POISSON:
            return math.exp(-m)
        return 1.0 / (1.0 + m)

    def pmf(self, m: float, k: int) -> float:
        if k < 0:
            return 0.0
        if self is OffspringFamily.POISSON:
            if m == 0.0:
                return 1.0 if k == 0 else 0.0
            return math.exp(-m + k * math.log(m) - math.lgamma(k + 1))
        q = m / (1.0 + m)
        return (1.0 - q) * q**k


def parse_family(text: str) -> OffspringFamily:
    try:
        return OffspringFamily(text)
    except ValueError:
        raise ValueError(f"unknown offspring family {text!r}") from None


def sample_mean(law: MeanLaw, rng: np.random.Generator) -> float:
    """One draw of the mean offspring from mu."""
    return law.sample(rng)


def mass_above(law: MeanLaw, threshold: float) -> float:
    """mu({m : m > threshold})."""
    return law.mass_above(threshold)


def sample_offspring(family: OffspringFamily, m: float, rng: np.random.Generator) -> int:
    """One offspring count with mean m."""
    if m < 0:
        raise ValueError("mean must be nonnegative")
    if family is OffspringFamily.POISSON:
        return int(rng.poisson(m))
    return int(rng.geometric(1.0 / (1.0 + m))) - 1


def aggregate_offspring(
    family: OffspringFamily,
    m: float,
    n: int,
    rng: np.random.Generator,
    per_parent_threshold: int = 1,
) -> int:
    """Total offspring of ``n`` parents sharing mean ``m``.

    Distributed as the sum of ``n`` independent draws from
    :func:`sample_offspring`.  Above ``per_parent_threshold`` parents the sum
    is drawn in one shot (Poisson additivity, or a negative binomial for the
    geometric family); below it the parents are sampled individually.
    """
    if n < 0:
        raise ValueError("parent count must be nonnegative")
    if n == 0:
        return 0
    if family is OffspringFamily.POISSON:
        if n < per_parent_threshold:
            return int(rng.poisson(m, size=n).sum())
        return int(rng.poisson(n * m))
    p = 1.0 / (1.0 + m)
    if n < per_parent_threshold:
        return int((rng.geometric(p, size=n) - 1).sum())
    return int(rng.negative_binomial(n, p))

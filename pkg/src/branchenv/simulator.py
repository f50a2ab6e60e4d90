"""Generation-synchronous simulation of the three processes: fixed
environment, global random environment and local random environment with
per-birth mutation, including the tree-of-types recorder.

Trials are deterministic given ``(seed, trial_index)``: every trial gets its
own generator derived through a ``SeedSequence`` spawn key, so results do not
depend on execution order or worker count.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from . import _kernels_py
from .backend import get_kernels
from .laws import MeanLaw, OffspringFamily, aggregate_offspring, sample_mean


@dataclass(frozen=True)
class SimConfig:
    """Desk-scale proxy parameters for an unbounded process."""

    max_generations: int
    population_cap: int
    per_type_individual_threshold: int = 1
    seed: int = 0
    trial_index: int = 0
    cohort_cap: int = 0  # 0 disables the per-type cap

    def __post_init__(self):
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")
        if self.population_cap < 1:
            raise ValueError("population_cap must be >= 1")
        if self.per_type_individual_threshold < 1:
            raise ValueError("per_type_individual_threshold must be >= 1")
        if self.trial_index < 0:
            raise ValueError("trial_index must be >= 0")


@dataclass(frozen=True)
class Fixed:
    """Fixed environment: one mean offspring m for every individual."""

    m: float


@dataclass(frozen=True)
class Global:
    """Globally changing environment: one fresh mean per generation."""


@dataclass(frozen=True)
class Local:
    """Locally changing environment: per-birth mutation with probability r."""

    r: float

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError("mutation probability must be in [0, 1]")


Regime = Fixed | Global | Local


class TrialStatus(Enum):
    EXTINCT = "Extinct"
    SURVIVED_TO_CAP = "SurvivedToCap"
    POPULATION_CAP_HIT = "PopulationCapHit"

    def __str__(self):
        return self.value


_STATUS_BY_CODE = {
    _kernels_py.STATUS_EXTINCT: TrialStatus.EXTINCT,
    _kernels_py.STATUS_SURVIVED_TO_CAP: TrialStatus.SURVIVED_TO_CAP,
    _kernels_py.STATUS_POPULATION_CAP_HIT: TrialStatus.POPULATION_CAP_HIT,
}


@dataclass(frozen=True)
class GlobalState:
    generation: int
    z: int


@dataclass
class TreeOfTypes:
    """Genealogy of types: vertex per type ever born, edge from the parent
    type of a type's first individual.  ``parent[k-1]`` is the parent id of
    type ``k``; the root (type 1) carries the sentinel 0."""

    parent: list[int] = field(default_factory=lambda: [0])

    @property
    def vertex_count(self) -> int:
        return len(self.parent)

    def parent_of(self, type_id: int) -> int:
        if type_id < 2 or type_id > len(self.parent):
            raise KeyError(f"type {type_id} has no parent edge")
        return self.parent[type_id - 1]

    def add_vertex(self, parent_id: int) -> int:
        new_id = len(self.parent) + 1
        if not 1 <= parent_id < new_id:
            raise ValueError("types must be numbered by first appearance")
        self.parent.append(parent_id)
        return new_id

    def validate(self) -> None:
        if self.parent[0] != 0:
            raise AssertionError("root must be type 1 with no parent")
        for k, p in enumerate(self.parent[1:], start=2):
            if not 1 <= p < k:
                raise AssertionError(f"parent({k}) = {p} violates appearance order")
        # appearance order makes every vertex reach the root by parent links


@dataclass
class LocalPopulation:
    """Aggregated per-type state: type id -> (mean, headcount)."""

    generation: int
    cohorts: dict[int, tuple[float, int]]
    next_type_id: int
    tree: TreeOfTypes

    @staticmethod
    def founder(m1: float) -> "LocalPopulation":
        return LocalPopulation(0, {1: (m1, 1)}, 2, TreeOfTypes())

    @property
    def total(self) -> int:
        return sum(n for _, n in self.cohorts.values())


@dataclass(frozen=True)
class TrialOutcome:
    status: TrialStatus
    at_generation: int
    final_population: int
    peak_population: int
    tree_vertex_count: int = 0
    max_cohort_peak: int = 0
    alive_type_count: int = 0
    cohort_cap_hit: bool = False
    type_parents: np.ndarray | None = None
    type_birth_generations: np.ndarray | None = None
    alive_type_ids: np.ndarray | None = None

    @property
    def survived_proxy(self) -> bool:
        """Survival proxy: reached a cap or still alive at the horizon."""
        return self.status is not TrialStatus.EXTINCT


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Stream for one trial, derived from (master seed, trial index)."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(trial_index,))
    )


def step_fixed(
    state: GlobalState,
    family: OffspringFamily,
    m: float,
    rng: np.random.Generator,
    per_parent_threshold: int = 1,
) -> GlobalState:
    """One generation of the fixed-environment process; z = 0 is absorbing
    and consumes no randomness."""
    if state.z == 0:
        return GlobalState(state.generation + 1, 0)
    z = aggregate_offspring(family, m, state.z, rng, per_parent_threshold)
    return GlobalState(state.generation + 1, z)


def step_global(
    state: GlobalState,
    law: MeanLaw,
    family: OffspringFamily,
    rng: np.random.Generator,
    per_parent_threshold: int = 1,
) -> GlobalState:
    """One generation with a fresh environment shared by the whole
    generation."""
    if state.z == 0:
        return GlobalState(state.generation + 1, 0)
    m = sample_mean(law, rng)
    z = aggregate_offspring(family, m, state.z, rng, per_parent_threshold)
    return GlobalState(state.generation + 1, z)


def step_local(
    pop: LocalPopulation,
    law: MeanLaw,
    family: OffspringFamily,
    r: float,
    rng: np.random.Generator,
    per_parent_threshold: int = 1,
) -> LocalPopulation:
    """One generation of the local process on aggregated cohorts.

    Cohorts are processed in ascending type id; children mutate independently
    with probability r (binomial split), each mutant founding a new type with
    a fresh mean and a tree edge from its parent type."""
    if not 0.0 <= r <= 1.0:
        raise ValueError("mutation probability must be in [0, 1]")
    items = sorted(pop.cohorts.items())
    ids = np.array([i for i, _ in items], dtype=np.int64)
    means = np.array([mv for _, (mv, _) in items], dtype=np.float64)
    counts = np.array([n for _, (_, n) in items], dtype=np.int64)
    ids, means, counts, next_id, mutant_parents, _ = _kernels_py.local_generation(
        rng,
        ids,
        means,
        counts,
        pop.next_type_id,
        law.encode(),
        family.code,
        r,
        per_parent_threshold,
    )
    tree = TreeOfTypes(list(pop.tree.parent))
    for parent_id in mutant_parents.tolist():
        tree.add_vertex(int(parent_id))
    cohorts = {
        int(i): (float(mv), int(n)) for i, mv, n in zip(ids, means, counts)
    }
    return LocalPopulation(pop.generation + 1, cohorts, next_id, tree)


def run_trial(
    regime: Regime,
    law: MeanLaw | None,
    family: OffspringFamily,
    cfg: SimConfig,
    record_tree: bool = False,
    backend: str | None = None,
) -> TrialOutcome:
    """Run one trial to extinction, a cap, or the generation horizon."""
    kernels = get_kernels(backend)
    rng = trial_rng(cfg.seed, cfg.trial_index)
    tpp = cfg.per_type_individual_threshold

    if isinstance(regime, Fixed):
        code, gen, z, peak = kernels.run_fixed_trial(
            rng, family.code, regime.m, cfg.max_generations, cfg.population_cap, tpp
        )
        return TrialOutcome(_STATUS_BY_CODE[code], gen, z, peak)

    if law is None:
        raise ValueError("global and local regimes require a mean law")

    if isinstance(regime, Global):
        code, gen, z, peak = kernels.run_global_trial(
            rng, law.encode(), family.code, cfg.max_generations, cfg.population_cap, tpp
        )
        return TrialOutcome(_STATUS_BY_CODE[code], gen, z, peak)

    if isinstance(regime, Local):
        (
            code,
            gen,
            z,
            peak,
            tree_count,
            max_cohort,
            alive_types,
            cc_hit,
            parents,
            births,
            alive_ids,
        ) = kernels.run_local_trial(
            rng,
            law.encode(),
            family.code,
            regime.r,
            cfg.max_generations,
            cfg.population_cap,
            cfg.cohort_cap,
            tpp,
            record_tree,
        )
        return TrialOutcome(
            _STATUS_BY_CODE[code],
            gen,
            z,
            peak,
            tree_vertex_count=tree_count,
            max_cohort_peak=max_cohort,
            alive_type_count=alive_types,
            cohort_cap_hit=cc_hit,
            type_parents=parents,
            type_birth_generations=births,
            alive_type_ids=alive_ids,
        )

    raise TypeError(f"unknown regime {regime!r}")


def run_trials(
    regime: Regime,
    law: MeanLaw | None,
    family: OffspringFamily,
    cfg: SimConfig,
    trials: int,
    record_tree: bool = False,
    backend: str | None = None,
):
    """Trials 0..trials-1 as a generator of TrialOutcome."""
    for i in range(trials):
        yield run_trial(
            regime,
            law,
            family,
            replace(cfg, trial_index=i),
            record_tree=record_tree,
            backend=backend,
        )

"""Command-line front end.

Subcommands: ``classify`` (analytic verdicts at a point), ``simulate``
(Monte Carlo survival estimate), ``rc`` (critical mutation probability for
the uniform mean law) and ``sweep`` (an (a, r) grid streamed as CSV/JSON
rows).  Exit status 0 on success, 1 on computational error, 2 on usage
error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

from . import analytics
from .estimators import SWEEP_COLUMNS, SWEEP_REGIMES, estimate_survival, sweep
from .laws import MeanLaw, OffspringFamily, parse_family, parse_mean_law
from .simulator import Fixed, Global, Local, Regime, SimConfig

SIG_DIGITS = 12


def fmt(value) -> str:
    """Fixed 12-significant-digit rendering; byte-stable across reruns."""
    if value is None or value == "":
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    v = float(value)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return f"{v:.{SIG_DIGITS}g}"


def _json_value(value):
    if value == "" or value is None:
        return None
    return value


def grid_points(spec: str) -> list[float]:
    """Parse ``lo:hi:steps`` with inclusive endpoints."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"bad grid spec {spec!r}: expected lo:hi:steps")
    lo, hi = float(parts[0]), float(parts[1])
    steps = int(parts[2])
    if steps < 1:
        raise ValueError(f"bad grid spec {spec!r}: steps must be >= 1")
    if steps == 1:
        return [lo]
    return [lo + i * (hi - lo) / (steps - 1) for i in range(steps)]


@dataclass
class RunSpec:
    command: str
    law: MeanLaw | None = None
    family: OffspringFamily = OffspringFamily.POISSON
    regime: str = "all"
    r: float | None = None
    m: float | None = None
    a: float | None = None
    tol: float = 1e-9
    a_grid: list[float] = field(default_factory=list)
    r_grid: list[float] = field(default_factory=list)
    regimes: tuple[str, ...] = SWEEP_REGIMES
    trials: int = 1000
    max_generations: int = 200
    population_cap: int = 1_000_000
    cohort_cap: int = 0
    seed: int = 0
    output: str | None = None
    format: str = "csv"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="branchenv",
        description=(
            "Branching processes in fixed, globally changing and locally "
            "changing random environments."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    default_seed = int(os.environ.get("BRANCHENV_SEED", "0"))

    def add_common(p, with_sim=False):
        p.add_argument("--family", default="poisson", help="poisson or geometric")
        p.add_argument("--format", default=None, choices=("text", "csv", "json"))
        p.add_argument("--output", default=None, help="output path (default stdout)")
        if with_sim:
            p.add_argument("--trials", type=int, default=1000)
            p.add_argument("--max-generations", type=int, default=200)
            p.add_argument("--population-cap", type=int, default=1_000_000)
            p.add_argument("--cohort-cap", type=int, default=0)
            p.add_argument("--seed", type=int, default=default_seed)

    p = sub.add_parser("classify", help="analytic verdicts at one point")
    p.add_argument("--law", required=True, help="e.g. uniform:1.5")
    p.add_argument(
        "--regime", default="all", choices=("fixed", "global", "local", "all")
    )
    p.add_argument("--r", type=float, default=None)
    add_common(p)

    p = sub.add_parser("simulate", help="Monte Carlo survival estimate")
    p.add_argument("--law", required=True)
    p.add_argument("--regime", required=True, choices=("fixed", "global", "local"))
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--m", type=float, default=None, help="fixed-regime mean")
    add_common(p, with_sim=True)

    p = sub.add_parser("rc", help="critical mutation probability, uniform law")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    add_common(p)

    p = sub.add_parser("sweep", help="(a, r) grid of verdicts and estimates")
    p.add_argument("--a-grid", required=True, help="lo:hi:steps")
    p.add_argument("--r-grid", required=True, help="lo:hi:steps")
    p.add_argument(
        "--regimes",
        default=",".join(SWEEP_REGIMES),
        help="comma list among fixed,global,local",
    )
    add_common(p, with_sim=True)
    return parser


def parse_args(argv: list[str]) -> RunSpec:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        spec = RunSpec(command=ns.command)
        spec.family = parse_family(ns.family)
        spec.format = ns.format
        spec.output = ns.output
        if ns.command in ("classify", "simulate"):
            spec.law = parse_mean_law(ns.law)
            spec.regime = ns.regime
            spec.r = ns.r
            if spec.regime == "local" and spec.r is None:
                parser.error("--r is required when --regime local")
            if spec.r is not None and not 0.0 <= spec.r <= 1.0:
                parser.error("--r must be in [0, 1]")
        if ns.command == "simulate":
            spec.m = ns.m
        if ns.command == "rc":
            spec.a = ns.a
            spec.tol = ns.tol
        if ns.command == "sweep":
            spec.a_grid = grid_points(ns.a_grid)
            spec.r_grid = grid_points(ns.r_grid)
            regimes = tuple(x for x in ns.regimes.split(",") if x)
            for name in regimes:
                if name not in SWEEP_REGIMES:
                    parser.error(f"unknown regime {name!r} in --regimes")
            spec.regimes = regimes
        if ns.command in ("simulate", "sweep"):
            spec.trials = ns.trials
            spec.max_generations = ns.max_generations
            spec.population_cap = ns.population_cap
            spec.cohort_cap = ns.cohort_cap
            spec.seed = ns.seed
        if spec.format is None:
            spec.format = "csv" if ns.command in ("simulate", "sweep") else "text"
        return spec
    except ValueError as exc:
        parser.error(str(exc))
        raise AssertionError("unreachable")


def _row_line(row: dict) -> str:
    return ",".join(fmt(row[c]) for c in SWEEP_COLUMNS)


def _emit_rows(rows, out, output_format):
    if output_format == "json":
        out.write("[\n")
        first = True
        for row in rows:
            if not first:
                out.write(",\n")
            first = False
            obj = {c: _json_value(row[c]) for c in SWEEP_COLUMNS}
            out.write(json.dumps(obj))
            out.flush()
        out.write("\n]\n")
    else:
        out.write(",".join(SWEEP_COLUMNS) + "\n")
        for row in rows:
            out.write(_row_line(row) + "\n")
            out.flush()


def _classify_rows(spec: RunSpec) -> list[tuple[str, object]]:
    law = spec.law
    rows: list[tuple[str, object]] = [("law", law.parameter_string())]
    rows.append(("family", spec.family.value))
    if spec.r is not None:
        rows.append(("r", spec.r))
    rows.append(("e_mean", analytics.expect_mean(law)))
    rows.append(("e_log_mean", analytics.expect_log_mean(law)))
    if not law.is_point_mass or analytics.expect_mean(law) > 0:
        try:
            rows.append(("jensen_gap", analytics.jensen_gap(law)))
        except ValueError:
            pass
    if spec.regime in ("fixed", "all"):
        verdict = "Survives" if analytics.expect_mean(law) > 1.0 else "DiesOut"
        rows.append(("fixed_class", verdict))
    if spec.regime in ("global", "all"):
        rows.append(("global_class", str(analytics.classify_global(law, spec.family).verdict)))
    if spec.regime in ("local", "all") and spec.r is not None:
        regime_class = analytics.classify_local(law, spec.r)
        rows.append(("e_x", regime_class.expected_x))
        rows.append(("local_class", str(regime_class.label)))
    return rows


def _emit_pairs(pairs, out, output_format):
    if output_format == "json":
        obj = {k: v for k, v in pairs}
        out.write(json.dumps(obj, default=float) + "\n")
    else:
        for k, v in pairs:
            out.write(f"{k}={fmt(v)}\n")


def execute(spec: RunSpec) -> int:
    out = sys.stdout
    close = False
    if spec.output is not None:
        out = open(spec.output, "w")
        close = True
    try:
        if spec.command == "classify":
            _emit_pairs(_classify_rows(spec), out, spec.format)
            return 0

        if spec.command == "rc":
            try:
                result = analytics.critical_r_uniform(spec.a, tol=spec.tol)
            except (ValueError, analytics.BracketFailureError) as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 1
            _emit_pairs(
                [
                    ("a", spec.a),
                    ("r_c", result.r_c),
                    ("bracket_lo", result.bracket_lo),
                    ("bracket_hi", result.bracket_hi),
                    ("residual", result.residual),
                ],
                out,
                spec.format,
            )
            return 0

        if spec.command == "simulate":
            law = spec.law
            regime: Regime
            if spec.regime == "fixed":
                m = spec.m if spec.m is not None else analytics.expect_mean(law)
                regime = Fixed(m)
            elif spec.regime == "global":
                regime = Global()
            else:
                regime = Local(spec.r)
            cfg = SimConfig(
                max_generations=spec.max_generations,
                population_cap=spec.population_cap,
                cohort_cap=spec.cohort_cap,
                seed=spec.seed,
            )
            try:
                est = estimate_survival(regime, law, spec.family, cfg, spec.trials)
            except (ValueError, ArithmeticError) as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 1
            row = {c: "" for c in SWEEP_COLUMNS}
            if law.kind == "uniform":
                row["a"] = law.a
                row["e_mean"] = analytics.expect_mean(law)
                row["e_log_mean"] = analytics.expect_log_mean(law)
            if spec.r is not None:
                row["r"] = spec.r
                if law.kind == "uniform":
                    row["e_x"] = analytics.expected_tree_offspring(law, spec.r)
            row["regime"] = spec.regime
            row["trials"] = est.trials
            row["survivals"] = est.survivals
            row["p_hat"] = est.p_hat
            row["ci_lo"] = est.ci_lo
            row["ci_hi"] = est.ci_hi
            row["status"] = "ok"
            _emit_rows([row], out, spec.format)
            return 0

        if spec.command == "sweep":
            grid = [(a, r) for a in spec.a_grid for r in spec.r_grid]
            cfg = SimConfig(
                max_generations=spec.max_generations,
                population_cap=spec.population_cap,
                cohort_cap=spec.cohort_cap,
                seed=spec.seed,
            )
            rows = sweep(grid, spec.family, cfg, spec.trials, regimes=spec.regimes)
            _emit_rows(rows, out, spec.format)
            return 0

        raise AssertionError(f"unknown command {spec.command!r}")
    finally:
        if close:
            out.close()


def main(argv: list[str] | None = None) -> None:
    spec = parse_args(sys.argv[1:] if argv is None else argv)
    sys.exit(execute(spec))


if __name__ == "__main__":
    main()

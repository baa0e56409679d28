from __future__ import annotations

__all__ = [
    "CONFIG_CLASSES",
    "RUNNERS",
    "SELECTORS",
    "ComparisonRow",
    "ExperimentResult",
    "ExperimentSpec",
    "build_config",
    "measure_time",
    "resolve_problem",
    "run_experiment",
    "summarise_runs",
]

import asyncio
import functools
import logging
import os
import time
import typing as t
from concurrent.futures import ProcessPoolExecutor

import attr
import numpy as np

from src.config import Config
from src.models.bacterial_foraging import BfoConfig, run_bfo
from src.models.bee_colony import AbcConfig, run_abc
from src.models.errors import RejectedInputError, UsageError
from src.models.oracle import OracleSolution, solve
from src.models.particle_swarm import PsoConfig, run_pso
from src.models.problem import Dispatch, EldProblem, builtin_problem, builtin_problem_ids
from src.models.swarm import OptimizerConfig, RunReport
from src.static import (
    ALGORITHMS,
    COMPARISON_CSV_NAME,
    COMPARISON_TEXT_NAME,
    CONVERGENCE_MARGIN,
    REFERENCE_COST_TOLERANCE,
    REFERENCE_RESULTS,
    RUN_TRACE_CSV_TEMPLATE,
    TRACE_CSV_TEMPLATE,
)

logger = logging.getLogger(__name__)

CONFIG_CLASSES: dict[str, type[OptimizerConfig]] = {"pso": PsoConfig, "abc": AbcConfig, "bfo": BfoConfig}
RUNNERS: dict[str, t.Callable[..., RunReport]] = {"pso": run_pso, "abc": run_abc, "bfo": run_bfo}
SELECTORS: tuple[str, ...] = (*ALGORITHMS, "oracle", "all")
STOP_KEYS: frozenset[str] = frozenset({"max_iterations", "target_cost", "stagnation_window", "improvement_epsilon"})


def build_config(algorithm: str, overrides: t.Mapping[str, t.Any]) -> tuple[OptimizerConfig, int | None]:
    """Build an optimizer config from the defaults and a section of overrides.

    Parameters
    ----------
    algorithm : str
        One of pso, abc or bfo.
    overrides : Mapping[str, Any]
        Config keys for the algorithm, stop criteria keys and an optional `seed`.

    Returns
    -------
    tuple[OptimizerConfig, int | None]
        The config and the seed base override, if any.

    Raises
    ------
    UsageError
        If a key is unknown or a value has the wrong type.
    RejectedInputError
        If a value is outside its valid range.

    """
    cls = CONFIG_CLASSES[algorithm]
    options = dict(overrides)
    seed = options.pop("seed", None)
    stop_options = {key: options.pop(key) for key in STOP_KEYS & options.keys()}

    known = {field.name for field in attr.fields(cls)} - {"stop"}
    unknown = sorted(options.keys() - known)
    if unknown:
        raise UsageError(f"Unknown {algorithm} config keys: {', '.join(unknown)}")

    try:
        config = cls(**options)
        if stop_options:
            config = attr.evolve(config, stop=attr.evolve(config.stop, **stop_options))
        seed = int(seed) if seed is not None else None
    except TypeError as e:
        raise UsageError(f"Invalid {algorithm} config value: {e}") from e

    return config, seed


@attr.define(frozen=True, kw_only=True)
class ExperimentSpec:
    """What the benchmark harness should run."""

    problem: str
    """Built-in problem id or path to a problem file."""

    algorithm: str = "all"
    """pso, abc, bfo, oracle or all."""

    overrides: dict[str, dict[str, t.Any]] = attr.field(factory=dict)
    """Per-algorithm config overrides."""

    n_timing_runs: int = Config.TIMING_RUNS
    """Seeded runs per algorithm."""

    seed_base: int = Config.SEED_BASE
    """Run r uses seed seed_base + r."""

    output_dir: str = Config.OUTPUT_DIR
    """Directory receiving the comparison table and traces."""

    emit_traces: bool = False
    """Whether to write the trace of every run, the best run's trace is always written."""

    timing: bool = True
    """Whether to time runs, runs execute serially when set and concurrently otherwise."""

    dump_problem: bool = False
    """Whether to write the selected problem as JSON to the output directory."""

    def __attrs_post_init__(self) -> None:
        if self.algorithm not in SELECTORS:
            raise UsageError(f"Unknown algorithm '{self.algorithm}', expected one of: {', '.join(SELECTORS)}")

        if self.n_timing_runs < 1:
            raise UsageError(f"The number of runs must be at least 1, got {self.n_timing_runs}")

        if not 0 <= self.seed_base < 2**64:
            raise UsageError(f"Seed must be an unsigned 64-bit integer, got {self.seed_base}")

    @property
    def algorithms(self) -> list[str]:
        """The optimizers selected, empty for the oracle alone."""
        if self.algorithm == "all":
            return list(ALGORITHMS)

        if self.algorithm == "oracle":
            return []

        return [self.algorithm]


@attr.define(frozen=True, kw_only=True)
class ComparisonRow:
    """One line of the comparison table."""

    algorithm: str
    """Optimizer name, or oracle."""

    dispatch: Dispatch
    """Best dispatch found."""

    cost: float
    """Its fuel cost in $/h."""

    oracle_gap: float
    """Cost minus the oracle cost in $/h."""

    iterations: int | None = None
    """Iterations of the best run to come within the convergence margin of the oracle."""

    evaluations: int | None = None
    """Objective evaluations of the best run to come within the convergence margin of the oracle."""

    mean_time_ms: float | None = None
    """Mean wall time per run in milliseconds, None when runs were not timed."""

    iterations_used: int | None = None
    """Iterations the best run performed in total."""

    total_evaluations: int | None = None
    """Objective evaluations the best run performed in total."""

    mean_cost: float | None = None
    """Mean best cost across runs."""

    worst_cost: float | None = None
    """Highest best cost across runs."""

    success_rate: float | None = None
    """Fraction of runs ending within the convergence margin of the oracle."""

    runs: int = 1
    """Number of runs summarised."""


@attr.define(frozen=True, kw_only=True)
class ExperimentResult:
    """Everything an experiment produced."""

    problem: EldProblem
    oracle: OracleSolution
    rows: list[ComparisonRow]
    reports: dict[str, list[RunReport]]
    reference_cost: float | None
    files: list[str]


def measure_time(run: t.Callable[[int], RunReport], seeds: t.Sequence[int]) -> tuple[float, list[RunReport]]:
    """Time complete optimizer runs one after another.

    Parameters
    ----------
    run : Callable[[int], RunReport]
        Runs the optimizer with the given seed.
    seeds : Sequence[int]
        One seed per run.

    Returns
    -------
    tuple[float, list[RunReport]]
        Mean wall time in milliseconds rounded to 2 decimals, and the reports in seed order.

    """
    if not seeds:
        raise RejectedInputError("At least one timing run is needed")

    durations: list[float] = []
    reports: list[RunReport] = []

    for seed in seeds:
        start = time.perf_counter()
        reports.append(run(seed))
        durations.append(time.perf_counter() - start)

    return round(float(np.mean(durations)) * 1000, 2), reports


def summarise_runs(
    algorithm: str, reports: t.Sequence[RunReport], oracle: OracleSolution, mean_time_ms: float | None
) -> ComparisonRow:
    """Reduce the runs of one optimizer to a comparison row.

    The best run (lowest cost, earliest seed on ties) supplies the dispatch and the iterations and
    evaluations it needed to come within the convergence margin of the oracle.
    """
    best = min(reports, key=lambda report: report.best_cost)
    threshold = oracle.cost * (1 + CONVERGENCE_MARGIN)
    costs = np.array([report.best_cost for report in reports])

    iterations = best.trace.iterations_to(threshold)
    evaluations = best.trace.evaluations_to(threshold)
    if iterations is None:
        logger.warning(f"Best {algorithm} run never came within {CONVERGENCE_MARGIN:.1%} of the oracle")

    gap = best.best_cost - oracle.cost
    if gap < -1e-3:
        logger.warning(f"{algorithm} beat the oracle by {-gap:.6f} $/h")

    return ComparisonRow(
        algorithm=algorithm,
        dispatch=best.best_dispatch,
        cost=best.best_cost,
        oracle_gap=gap,
        iterations=iterations,
        evaluations=evaluations,
        mean_time_ms=mean_time_ms,
        iterations_used=best.iterations_used,
        total_evaluations=best.evaluations,
        mean_cost=float(costs.mean()),
        worst_cost=float(costs.max()),
        success_rate=float(np.mean(costs <= threshold)),
        runs=len(reports),
    )


async def resolve_problem(selector: str) -> EldProblem:
    """Turn a built-in id or a problem file path into a problem."""
    from src.utils.output import load_problem

    if selector in builtin_problem_ids():
        return builtin_problem(selector)

    if os.path.exists(selector) or os.sep in selector or selector.endswith(".json"):
        return await load_problem(selector)

    return builtin_problem(selector)


async def _run_algorithm(
    spec: ExperimentSpec, problem: EldProblem, algorithm: str
) -> tuple[list[RunReport], float | None]:
    config, seed_override = build_config(algorithm, spec.overrides.get(algorithm, {}))
    seed_base = seed_override if seed_override is not None else spec.seed_base
    seeds = [seed_base + r for r in range(spec.n_timing_runs)]
    runner = functools.partial(RUNNERS[algorithm], problem, config)
    loop = asyncio.get_running_loop()

    logger.info(f"Running {algorithm} on {problem.name}: {len(seeds)} runs from seed {seed_base}")

    # Timed runs are serial so wall clock measurements do not compete for the CPU
    if spec.timing:
        mean_time_ms, reports = await loop.run_in_executor(None, measure_time, runner, seeds)
        return reports, mean_time_ms

    with ProcessPoolExecutor() as pool:
        reports = await asyncio.gather(*(loop.run_in_executor(pool, runner, seed) for seed in seeds))

    return list(reports), None


async def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run the oracle and the selected optimizers on a problem and write the comparison.

    Parameters
    ----------
    spec : ExperimentSpec
        What to run and where to write the results.

    Returns
    -------
    ExperimentResult
        The comparison rows, every run report and the files written.

    Raises
    ------
    ProblemFileError
        If the problem file cannot be read.
    InfeasibilityError
        If the problem's demand cannot be met.
    UsageError
        If the experiment settings or the config overrides are invalid.
    OutputError
        If an output file cannot be written.

    """
    from src.utils.helpers import format_comparison
    from src.utils.output import emit_trace, save_problem, write_comparison_csv, write_text

    problem = await resolve_problem(spec.problem)
    problem.check_feasible()

    oracle = solve(problem)
    reference = REFERENCE_RESULTS.get(problem.name)
    reference_cost = reference["cost"] if reference else None

    if reference_cost is not None and abs(oracle.cost - reference_cost) > REFERENCE_COST_TOLERANCE:
        logger.warning(
            f"Oracle cost {oracle.cost:.2f} $/h for {problem.name} differs from the published {reference_cost} $/h, "
            "the tabulated coefficients do not reproduce the published optimum"
        )

    rows = [ComparisonRow(algorithm="oracle", dispatch=oracle.dispatch, cost=oracle.cost, oracle_gap=0.0)]
    reports: dict[str, list[RunReport]] = {}
    files: list[str] = []

    for algorithm in spec.algorithms:
        runs, mean_time_ms = await _run_algorithm(spec, problem, algorithm)
        reports[algorithm] = runs
        row = summarise_runs(algorithm, runs, oracle, mean_time_ms)
        rows.append(row)

        logger.info(
            f"{algorithm}: best {row.cost:.4f} $/h (gap {row.oracle_gap:.4f}), "
            f"{row.success_rate:.0%} of runs within {CONVERGENCE_MARGIN:.1%} of the oracle"
        )

        best = min(runs, key=lambda report: report.best_cost)
        path = os.path.join(spec.output_dir, TRACE_CSV_TEMPLATE.format(algorithm=algorithm))
        await emit_trace(best, path)
        files.append(path)

        if spec.emit_traces:
            for report in runs:
                path = os.path.join(
                    spec.output_dir, RUN_TRACE_CSV_TEMPLATE.format(algorithm=algorithm, seed=report.seed)
                )
                await emit_trace(report, path)
                files.append(path)

    result = ExperimentResult(
        problem=problem,
        oracle=oracle,
        rows=rows,
        reports=reports,
        reference_cost=reference_cost,
        files=files,
    )

    csv_path = os.path.join(spec.output_dir, COMPARISON_CSV_NAME)
    text_path = os.path.join(spec.output_dir, COMPARISON_TEXT_NAME)
    await write_comparison_csv(rows, problem.n_units, csv_path)
    await write_text(format_comparison(result), text_path)
    files.extend([csv_path, text_path])

    if spec.dump_problem:
        problem_path = os.path.join(spec.output_dir, f"{problem.name}.json")
        await save_problem(problem, problem_path)
        files.append(problem_path)

    return result


# Copyright (C) 2025 BBombs

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

from __future__ import annotations

__all__ = [
    "ConvergenceTrace",
    "OptimizerConfig",
    "RngStream",
    "RunReport",
    "StopCriteria",
    "SwarmOptimizer",
    "should_stop",
]

import abc
import logging
import time
import typing as t

import attr
import numpy as np

from src.config import Config
from src.models.errors import RejectedInputError
from src.models.problem import Dispatch, EldProblem, batch_cost, batch_penalized, batch_repair, evaluate_cost

logger = logging.getLogger(__name__)

CONSTRAINT_MODES: tuple[str, ...] = ("repair", "penalty")


class RngStream:
    """Seeded source of uniform draws for a single optimizer run.

    Wraps a numpy PCG64 generator, identical seeds give identical draw sequences within one build.
    A stream is owned by one run and must not be shared between concurrent runs.

    Parameters
    ----------
    seed : int
        Unsigned 64-bit seed.

    """

    def __init__(self, seed: int) -> None:
        if not 0 <= int(seed) < 2**64:
            raise RejectedInputError(f"Seed must be an unsigned 64-bit integer, got {seed}")

        self._seed = int(seed)
        self._generator = np.random.Generator(np.random.PCG64(self._seed))
        self._draws = 0

    @property
    def seed(self) -> int:
        """The seed this stream was created with."""
        return self._seed

    @property
    def draws(self) -> int:
        """The number of draw calls made so far."""
        return self._draws

    def random(self, size: int | tuple[int, ...] | None = None) -> t.Any:
        """Uniform draws from [0, 1)."""
        self._draws += 1
        return self._generator.random(size)

    def uniform(self, low: t.Any, high: t.Any, size: int | tuple[int, ...] | None = None) -> t.Any:
        """Uniform draws from [low, high)."""
        self._draws += 1
        return self._generator.uniform(low, high, size)

    def integers(self, low: int, high: int) -> int:
        """A uniform integer from [low, high)."""
        self._draws += 1
        return int(self._generator.integers(low, high))

    def roulette(self, probabilities: np.ndarray) -> int:
        """Index drawn with the given probabilities."""
        self._draws += 1
        cumulative = np.cumsum(probabilities)
        index = int(np.searchsorted(cumulative, self._generator.random() * cumulative[-1], side="right"))
        return min(index, len(probabilities) - 1)


@attr.define(frozen=True, kw_only=True)
class StopCriteria:
    """When an optimizer run ends."""

    max_iterations: int = Config.MAX_ITERATIONS
    """Hard cap on iterations."""

    target_cost: float | None = None
    """Stop once the best cost reaches this value, in $/h."""

    stagnation_window: int = Config.STAGNATION_WINDOW
    """Stop when the last this-many iterations improved less than `improvement_epsilon`, 0 disables."""

    improvement_epsilon: float = Config.IMPROVEMENT_EPSILON
    """Smallest total improvement over the stagnation window that keeps a run going, in $/h."""

    def __attrs_post_init__(self) -> None:
        if self.max_iterations < 1:
            raise RejectedInputError(f"max_iterations must be at least 1, got {self.max_iterations}")

        if self.stagnation_window < 0:
            raise RejectedInputError(f"stagnation_window must be non-negative, got {self.stagnation_window}")

        if self.improvement_epsilon < 0:
            raise RejectedInputError(f"improvement_epsilon must be non-negative, got {self.improvement_epsilon}")


@attr.define
class ConvergenceTrace:
    """Best cost after every iteration of a run, with the evaluations spent so far."""

    best_cost_per_iteration: list[float] = attr.field(factory=list)
    """Global best cost after each iteration, non-increasing."""

    evaluations_per_iteration: list[int] = attr.field(factory=list)
    """Cumulative objective evaluations after each iteration."""

    def __len__(self) -> int:
        return len(self.best_cost_per_iteration)

    @property
    def final_cost(self) -> float:
        """The last recorded best cost."""
        if not self.best_cost_per_iteration:
            raise ValueError("Trace is empty")

        return self.best_cost_per_iteration[-1]

    def record(self, best_cost: float, evaluations: int) -> None:
        """Append the state after one iteration."""
        if self.best_cost_per_iteration:
            assert best_cost <= self.best_cost_per_iteration[-1], "Best cost increased between iterations"

        self.best_cost_per_iteration.append(float(best_cost))
        self.evaluations_per_iteration.append(int(evaluations))

    def iterations_to(self, threshold: float) -> int | None:
        """First iteration (1-based) whose best cost is at or below `threshold`, None if never reached."""
        for i, cost in enumerate(self.best_cost_per_iteration, 1):
            if cost <= threshold:
                return i

        return None

    def evaluations_to(self, threshold: float) -> int | None:
        """Evaluations spent by the first iteration reaching `threshold`, None if never reached."""
        iteration = self.iterations_to(threshold)
        return None if iteration is None else self.evaluations_per_iteration[iteration - 1]


@attr.define(frozen=True)
class RunReport:
    """Result of one seeded optimizer run."""

    algorithm: str
    """Short name of the optimizer."""

    best_dispatch: Dispatch
    """The best feasible dispatch found."""

    best_cost: float
    """Fuel cost of `best_dispatch` in $/h."""

    iterations_used: int
    """Iterations performed, chemotactic sweeps for bacterial foraging."""

    evaluations: int
    """Objective evaluations performed."""

    wall_time: float
    """Duration of the run in seconds."""

    trace: ConvergenceTrace
    """Best cost after every iteration."""

    seed: int
    """The seed of the run's random stream."""


def should_stop(criteria: StopCriteria, trace: ConvergenceTrace, iteration: int) -> bool:
    """Whether a run has met its stopping rule.

    Parameters
    ----------
    criteria : StopCriteria
        The stopping rule.
    trace : ConvergenceTrace
        The run's trace so far.
    iteration : int
        Number of completed iterations.

    Returns
    -------
    bool
        True when the iteration cap is reached, the target cost is met or the run has stagnated.

    """
    if iteration >= criteria.max_iterations:
        return True

    costs = trace.best_cost_per_iteration
    if not costs:
        return False

    if criteria.target_cost is not None and costs[-1] <= criteria.target_cost:
        return True

    window = criteria.stagnation_window
    if window and len(costs) > window:
        return costs[-1 - window] - costs[-1] < criteria.improvement_epsilon

    return False


@attr.define(frozen=True, kw_only=True)
class OptimizerConfig:
    """Settings shared by every optimizer."""

    stop: StopCriteria = attr.field(factory=StopCriteria)
    """The stopping rule."""

    constraint_handling: str = Config.CONSTRAINT_HANDLING
    """Either "repair" (project every candidate) or "penalty" (clamp and penalise)."""

    penalty: float = Config.PENALTY
    """Penalty coefficient used in penalty mode."""

    def __attrs_post_init__(self) -> None:
        if self.constraint_handling not in CONSTRAINT_MODES:
            raise RejectedInputError(
                f"constraint_handling must be one of {', '.join(CONSTRAINT_MODES)}, got {self.constraint_handling}"
            )

        if self.penalty < 0:
            raise RejectedInputError(f"penalty must be non-negative, got {self.penalty}")


class SwarmOptimizer(abc.ABC):
    """Base class for population optimizers over dispatch vectors.

    Subclasses initialise their population in `_initialise` and advance it by one iteration in
    `_iterate`, `run` owns the loop, the trace and the report.

    Parameters
    ----------
    problem : EldProblem
        The problem to optimise, must be feasible.
    config : OptimizerConfig
        The optimizer settings.
    rng : RngStream
        The random stream owned by this run.

    """

    name: t.ClassVar[str] = "swarm"

    def __init__(self, problem: EldProblem, config: OptimizerConfig, rng: RngStream) -> None:
        problem.check_feasible()

        self._problem = problem
        self._config = config
        self._rng = rng
        self._evaluations = 0
        self._trace = ConvergenceTrace()

    @property
    def problem(self) -> EldProblem:
        """The problem being optimised."""
        return self._problem

    @property
    def config(self) -> OptimizerConfig:
        """The optimizer settings."""
        return self._config

    @property
    def rng(self) -> RngStream:
        """The random stream owned by this run."""
        return self._rng

    @property
    def evaluations(self) -> int:
        """Objective evaluations performed so far."""
        return self._evaluations

    @property
    def trace(self) -> ConvergenceTrace:
        """The trace recorded so far."""
        return self._trace

    @property
    @abc.abstractmethod
    def best(self) -> tuple[np.ndarray, float]:
        """The best position found so far and its score."""

    @abc.abstractmethod
    def _initialise(self) -> None:
        """Create the initial population."""

    @abc.abstractmethod
    def _iterate(self) -> None:
        """Advance the population by one iteration."""

    def admit(self, outputs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Make candidate rows admissible and score them.

        In repair mode rows are projected onto the feasible set and scored by fuel cost. In penalty
        mode rows are only clamped to the unit limits and scored by the penalised objective.

        Parameters
        ----------
        outputs : np.ndarray
            Candidate matrix of shape (m, n_units).

        Returns
        -------
        tuple[np.ndarray, np.ndarray]
            The admitted rows and their scores.

        """
        if self.config.constraint_handling == "penalty":
            admitted = np.clip(np.atleast_2d(outputs), self.problem.lower, self.problem.upper)
            scores = batch_penalized(self.problem, admitted, self.config.penalty)
        else:
            admitted, _, _ = batch_repair(self.problem, outputs)
            scores = batch_cost(self.problem, admitted)

        self._evaluations += len(admitted)
        return admitted, scores

    def _final_dispatch(self, position: np.ndarray, score: float) -> tuple[Dispatch, float]:
        if self.config.constraint_handling == "penalty":
            repaired, _, _ = batch_repair(self.problem, position)
            dispatch = Dispatch(repaired[0])
            return dispatch, evaluate_cost(self.problem, dispatch)

        return Dispatch(position), float(score)

    def run(self) -> RunReport:
        """Run the optimizer until its stopping rule is met.

        Returns
        -------
        RunReport
            The best dispatch, its cost, the trace and the run's accounting.

        """
        start = time.perf_counter()
        self._initialise()
        iteration = 0

        while True:
            self._iterate()
            iteration += 1

            _, score = self.best
            self._trace.record(score, self._evaluations)

            if should_stop(self._config.stop, self._trace, iteration):
                break

        position, score = self.best
        dispatch, cost = self._final_dispatch(position, score)
        wall_time = time.perf_counter() - start

        logger.debug(
            f"{self.name} on {self.problem.name} (seed {self.rng.seed}): {cost:.4f} $/h after {iteration} "
            f"iterations and {self._evaluations} evaluations in {wall_time * 1000:.2f}ms"
        )

        return RunReport(
            algorithm=self.name,
            best_dispatch=dispatch,
            best_cost=cost,
            iterations_used=iteration,
            evaluations=self._evaluations,
            wall_time=wall_time,
            trace=self._trace,
            seed=self.rng.seed,
        )


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

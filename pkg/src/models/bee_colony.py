from __future__ import annotations

__all__ = ["AbcConfig", "AbcState", "BeeColony", "onlooker_probabilities", "perturb_source", "run_abc"]

import logging

import attr
import numpy as np

from src.config import Config
from src.models.errors import OptimizerStateError, RejectedInputError
from src.models.problem import Dispatch, EldProblem
from src.models.swarm import OptimizerConfig, RngStream, RunReport, SwarmOptimizer

logger = logging.getLogger(__name__)


@attr.define(frozen=True, kw_only=True)
class AbcConfig(OptimizerConfig):
    """Settings for the artificial bee colony."""

    colony_size: int = Config.ABC_COLONY_SIZE
    """Number of food sources, also the number of employed and of onlooker bees."""

    limit: int | None = Config.ABC_LIMIT
    """Failed improvement attempts before a source is abandoned, None for colony size times units."""

    def __attrs_post_init__(self) -> None:
        super().__attrs_post_init__()

        if self.colony_size < 2:
            raise RejectedInputError(f"colony_size must be at least 2, got {self.colony_size}")

        if self.limit is not None and self.limit < 1:
            raise RejectedInputError(f"limit must be at least 1, got {self.limit}")


@attr.define(eq=False)
class AbcState:
    """In-flight colony, one row per food source."""

    food_sources: np.ndarray
    costs: np.ndarray
    trial_counters: np.ndarray
    best_source: np.ndarray
    best_cost: float


def perturb_source(source: np.ndarray, partner: np.ndarray, dimension: int, phi: float) -> np.ndarray:
    """Move one dimension of a source relative to a partner source.

    Parameters
    ----------
    source : np.ndarray
        The source being refined.
    partner : np.ndarray
        The randomly chosen partner source.
    dimension : int
        The dimension to move.
    phi : float
        Step factor in [-1, 1].

    Returns
    -------
    np.ndarray
        A copy of `source` with x_j + phi·(x_j − partner_j) in the chosen dimension.

    """
    candidate = np.array(source, dtype=float, copy=True)
    candidate[dimension] = source[dimension] + phi * (source[dimension] - partner[dimension])
    return candidate


def onlooker_probabilities(costs: np.ndarray) -> np.ndarray:
    """Roulette wheel probabilities from source costs.

    Fitness is 1 / (1 + cost) for non-negative costs and 1 + |cost| otherwise, normalised to sum to 1.
    """
    costs = np.asarray(costs, dtype=float)
    fitness = np.where(costs >= 0, 1 / (1 + np.abs(costs)), 1 + np.abs(costs))
    return fitness / fitness.sum()


class BeeColony(SwarmOptimizer):
    """Artificial bee colony with employed, onlooker and scout phases over repaired dispatches.

    Parameters
    ----------
    problem : EldProblem
        The problem to optimise.
    config : AbcConfig
        Colony settings.
    rng : RngStream
        The random stream owned by this run.

    """

    name = "abc"

    def __init__(self, problem: EldProblem, config: AbcConfig, rng: RngStream) -> None:
        super().__init__(problem, config, rng)
        self._state: AbcState | None = None
        self._limit = config.limit if config.limit is not None else config.colony_size * problem.n_units

    @property
    def config(self) -> AbcConfig:
        """The colony settings."""
        return self._config  # type: ignore

    @property
    def limit(self) -> int:
        """Failed attempts tolerated before a source is abandoned."""
        return self._limit

    @property
    def state(self) -> AbcState:
        """The current colony."""
        if self._state is None:
            raise OptimizerStateError("Colony must be initialised to access its state")

        return self._state

    @state.setter
    def state(self, value: AbcState) -> None:
        self._state = value

    @property
    def best(self) -> tuple[np.ndarray, float]:
        return self.state.best_source, self.state.best_cost

    def _fresh_sources(self, count: int) -> tuple[np.ndarray, np.ndarray]:
        return self.admit(self.problem.random_outputs(self.rng, count))

    def init_colony(self) -> AbcState:
        """Scout the initial food sources uniformly within the unit limits and repair them."""
        sources, costs = self._fresh_sources(self.config.colony_size)
        best = int(np.argmin(costs))

        self._state = AbcState(
            food_sources=sources,
            costs=costs,
            trial_counters=np.zeros(len(sources), dtype=int),
            best_source=sources[best].copy(),
            best_cost=float(costs[best]),
        )
        return self._state

    def neighbor_candidate(self, index: int) -> Dispatch:
        """Try to improve one food source and keep the better of the two.

        One random dimension is moved relative to a random partner source. The candidate replaces
        the source only if it is strictly cheaper, otherwise the source's trial counter grows.

        Parameters
        ----------
        index : int
            The food source to refine.

        Returns
        -------
        Dispatch
            The repaired candidate, whether or not it was kept.

        """
        state = self.state
        size = len(state.food_sources)

        dimension = self.rng.integers(0, self.problem.n_units)
        partner = self.rng.integers(0, size - 1)
        if partner >= index:
            partner += 1
        phi = float(self.rng.uniform(-1.0, 1.0))

        raw = perturb_source(state.food_sources[index], state.food_sources[partner], dimension, phi)
        admitted, scores = self.admit(raw)
        candidate, score = admitted[0], float(scores[0])

        if score < state.costs[index]:
            state.food_sources[index] = candidate
            state.costs[index] = score
            state.trial_counters[index] = 0
        else:
            state.trial_counters[index] += 1

        return Dispatch(candidate)

    def onlooker_probabilities(self) -> np.ndarray:
        """Selection probability of every food source for the onlooker phase."""
        return onlooker_probabilities(self.state.costs)

    def scout_phase(self) -> bool:
        """Abandon the most exhausted source if it has exceeded the trial limit.

        At most one source is replaced per cycle, the remembered best is kept.

        Returns
        -------
        bool
            Whether a source was replaced.

        """
        state = self.state
        exhausted = int(np.argmax(state.trial_counters))

        if state.trial_counters[exhausted] <= self._limit:
            return False

        sources, costs = self._fresh_sources(1)
        state.food_sources[exhausted] = sources[0]
        state.costs[exhausted] = costs[0]
        state.trial_counters[exhausted] = 0
        return True

    def _remember_best(self) -> None:
        state = self.state
        best = int(np.argmin(state.costs))

        if state.costs[best] < state.best_cost:
            state.best_source = state.food_sources[best].copy()
            state.best_cost = float(state.costs[best])

    def _initialise(self) -> None:
        self.init_colony()

    def _iterate(self) -> None:
        state = self.state
        size = len(state.food_sources)
        costs_before = state.costs.copy()

        for i in range(size):
            self.neighbor_candidate(i)

        probabilities = self.onlooker_probabilities()
        for _ in range(size):
            self.neighbor_candidate(self.rng.roulette(probabilities))

        # A source that improved this cycle ends it fresh, later onlooker failures included
        state.trial_counters[state.costs < costs_before] = 0

        self._remember_best()
        if self.scout_phase():
            self._remember_best()


def run_abc(problem: EldProblem, config: AbcConfig | None = None, seed: int = Config.SEED_BASE) -> RunReport:
    """Run a bee colony on a problem with a fresh seeded stream."""
    return BeeColony(problem, config or AbcConfig(), RngStream(seed)).run()


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

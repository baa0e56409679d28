from __future__ import annotations

__all__ = ["BacterialForaging", "BfoConfig", "BfoState", "run_bfo", "tumble_direction"]

import logging

import attr
import numpy as np

from src.config import Config
from src.models.errors import OptimizerStateError, RejectedInputError
from src.models.problem import EldProblem
from src.models.swarm import OptimizerConfig, RngStream, RunReport, StopCriteria, SwarmOptimizer

logger = logging.getLogger(__name__)


@attr.define(frozen=True, kw_only=True)
class BfoConfig(OptimizerConfig):
    """Settings for bacterial foraging.

    The stopping rule counts chemotactic sweeps. Unless given, it caps the run at the full
    elimination, reproduction and chemotactic loop with stagnation disabled.
    """

    n_bacteria: int = Config.BFO_BACTERIA
    """Population size S, must be even."""

    n_chemotactic: int = Config.BFO_CHEMOTACTIC
    """Chemotactic sweeps per reproduction epoch."""

    n_swim: int = Config.BFO_SWIM
    """Maximum swim steps after a tumble."""

    n_reproduction: int = Config.BFO_REPRODUCTION
    """Reproduction epochs per elimination-dispersal epoch."""

    n_elimination: int = Config.BFO_ELIMINATION
    """Elimination-dispersal epochs."""

    p_ed: float = Config.BFO_P_ED
    """Probability that a bacterium is dispersed at the end of an elimination-dispersal epoch."""

    step_size: float | None = Config.BFO_STEP_SIZE
    """Tumble length in MW, None for a tenth of the narrowest unit range."""

    stop: StopCriteria = attr.field(
        default=attr.Factory(
            lambda self: StopCriteria(
                max_iterations=self.n_elimination * self.n_reproduction * self.n_chemotactic,
                stagnation_window=0,
            ),
            takes_self=True,
        )
    )

    def __attrs_post_init__(self) -> None:
        super().__attrs_post_init__()

        if self.n_bacteria < 2 or self.n_bacteria % 2:
            raise RejectedInputError(f"n_bacteria must be even and at least 2, got {self.n_bacteria}")

        if min(self.n_chemotactic, self.n_reproduction, self.n_elimination) < 1:
            raise RejectedInputError("n_chemotactic, n_reproduction and n_elimination must be at least 1")

        if self.n_swim < 0:
            raise RejectedInputError(f"n_swim must be non-negative, got {self.n_swim}")

        if not 0 <= self.p_ed <= 1:
            raise RejectedInputError(f"p_ed must be in [0, 1], got {self.p_ed}")

        if self.step_size is not None and self.step_size < 0:
            raise RejectedInputError(f"step_size must be non-negative, got {self.step_size}")

    @property
    def total_sweeps(self) -> int:
        """Chemotactic sweeps in the full loop."""
        return self.n_elimination * self.n_reproduction * self.n_chemotactic


@attr.define(eq=False)
class BfoState:
    """In-flight population, one row per bacterium."""

    positions: np.ndarray
    costs: np.ndarray
    health: np.ndarray
    best_position: np.ndarray
    best_cost: float


def tumble_direction(n_dims: int, rng: RngStream) -> np.ndarray:
    """A random direction of unit Euclidean length.

    Components are drawn uniformly from [-1, 1] and normalised, redrawing in the zero vector case.

    Parameters
    ----------
    n_dims : int
        Dimension of the direction.
    rng : RngStream
        The random stream to draw from.

    Returns
    -------
    np.ndarray
        The unit vector.

    """
    if n_dims < 1:
        raise RejectedInputError(f"n_dims must be at least 1, got {n_dims}")

    while True:
        delta = np.asarray(rng.uniform(-1.0, 1.0, n_dims), dtype=float)
        norm = np.sqrt(delta @ delta)
        if norm > 0:
            return delta / norm


class BacterialForaging(SwarmOptimizer):
    """Bacterial foraging with tumble and swim chemotaxis, reproduction and elimination-dispersal.

    One iteration is a chemotactic sweep over every bacterium. Reproduction follows every
    `n_chemotactic` sweeps and elimination-dispersal every `n_reproduction` reproductions.

    Parameters
    ----------
    problem : EldProblem
        The problem to optimise.
    config : BfoConfig
        Foraging settings.
    rng : RngStream
        The random stream owned by this run.

    """

    name = "bfo"

    def __init__(self, problem: EldProblem, config: BfoConfig, rng: RngStream) -> None:
        super().__init__(problem, config, rng)
        self._state: BfoState | None = None
        self._sweeps = 0
        self._reproductions = 0
        self._step_size = config.step_size if config.step_size is not None else 0.1 * float(problem.span.min())

    @property
    def config(self) -> BfoConfig:
        """The foraging settings."""
        return self._config  # type: ignore

    @property
    def step_size(self) -> float:
        """Tumble length in MW."""
        return self._step_size

    @property
    def state(self) -> BfoState:
        """The current population."""
        if self._state is None:
            raise OptimizerStateError("Population must be initialised to access its state")

        return self._state

    @state.setter
    def state(self, value: BfoState) -> None:
        self._state = value

    @property
    def best(self) -> tuple[np.ndarray, float]:
        return self.state.best_position, self.state.best_cost

    def init_population(self) -> BfoState:
        """Place the bacteria uniformly within the unit limits and repair them."""
        positions, costs = self.admit(self.problem.random_outputs(self.rng, self.config.n_bacteria))
        best = int(np.argmin(costs))

        self._state = BfoState(
            positions=positions,
            costs=costs,
            health=np.zeros(len(positions)),
            best_position=positions[best].copy(),
            best_cost=float(costs[best]),
        )
        return self._state

    def _remember(self, position: np.ndarray, cost: float) -> None:
        if cost < self.state.best_cost:
            self.state.best_position = position.copy()
            self.state.best_cost = cost

    def chemotactic_step(self, index: int) -> None:
        """Tumble one bacterium, then keep swimming in the same direction while it improves.

        Every evaluated cost is added to the bacterium's health. At most `n_swim` swim steps are
        taken and each is only taken after the previous move improved the cost.

        Parameters
        ----------
        index : int
            The bacterium to move.

        """
        state = self.state
        direction = tumble_direction(self.problem.n_units, self.rng)
        last_cost = float(state.costs[index])

        admitted, scores = self.admit(state.positions[index] + self._step_size * direction)
        position, cost = admitted[0], float(scores[0])
        state.health[index] += cost
        self._remember(position, cost)

        swims = 0
        while swims < self.config.n_swim and cost < last_cost:
            last_cost = cost
            admitted, scores = self.admit(position + self._step_size * direction)
            position, cost = admitted[0], float(scores[0])
            state.health[index] += cost
            self._remember(position, cost)
            swims += 1

        state.positions[index] = position
        state.costs[index] = cost

    def reproduce(self) -> None:
        """Replace the less healthy half of the population with copies of the healthier half.

        Lower accumulated cost is healthier, ties keep the lower index. Health is reset afterwards.
        """
        state = self.state
        half = len(state.positions) // 2
        survivors = np.argsort(state.health, kind="stable")[:half]
        order = np.concatenate([survivors, survivors])

        state.positions = state.positions[order].copy()
        state.costs = state.costs[order].copy()
        state.health = np.zeros(len(order))

    def eliminate_disperse(self) -> int:
        """Move each bacterium to a fresh random position with probability `p_ed`.

        Returns
        -------
        int
            The number of bacteria dispersed.

        """
        state = self.state
        dispersed = np.flatnonzero(self.rng.random(len(state.positions)) < self.config.p_ed)

        if len(dispersed):
            positions, costs = self.admit(self.problem.random_outputs(self.rng, len(dispersed)))
            state.positions[dispersed] = positions
            state.costs[dispersed] = costs

        return len(dispersed)

    def _initialise(self) -> None:
        self.init_population()

    def _iterate(self) -> None:
        for i in range(len(self.state.positions)):
            self.chemotactic_step(i)

        self._sweeps += 1

        if self._sweeps % self.config.n_chemotactic == 0:
            self.reproduce()
            self._reproductions += 1

            if self._reproductions % self.config.n_reproduction == 0:
                dispersed = self.eliminate_disperse()
                logger.debug(f"Dispersed {dispersed} bacteria after sweep {self._sweeps}")


def run_bfo(problem: EldProblem, config: BfoConfig | None = None, seed: int = Config.SEED_BASE) -> RunReport:
    """Run bacterial foraging on a problem with a fresh seeded stream."""
    return BacterialForaging(problem, config or BfoConfig(), RngStream(seed)).run()


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

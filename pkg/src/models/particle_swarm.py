from __future__ import annotations

__all__ = ["ParticleSwarm", "PsoConfig", "PsoState", "run_pso"]

import logging

import attr
import numpy as np

from src.config import Config
from src.models.errors import OptimizerStateError, RejectedInputError
from src.models.problem import EldProblem
from src.models.swarm import OptimizerConfig, RngStream, RunReport, SwarmOptimizer

logger = logging.getLogger(__name__)


@attr.define(frozen=True, kw_only=True)
class PsoConfig(OptimizerConfig):
    """Settings for the global best particle swarm."""

    swarm_size: int = Config.PSO_SWARM_SIZE
    """Number of particles."""

    w: float = Config.PSO_W
    """Inertia weight, a scalar."""

    c1: float = Config.PSO_C1
    """Cognitive acceleration constant."""

    c2: float = Config.PSO_C2
    """Social acceleration constant."""

    v_max_fraction: float = Config.PSO_V_MAX_FRACTION
    """Velocity limit per dimension as a fraction of the unit's operating range."""

    def __attrs_post_init__(self) -> None:
        super().__attrs_post_init__()

        if self.swarm_size < 2:
            raise RejectedInputError(f"swarm_size must be at least 2, got {self.swarm_size}")

        if min(self.w, self.c1, self.c2) < 0:
            raise RejectedInputError(f"w, c1 and c2 must be non-negative, got {self.w}, {self.c1}, {self.c2}")

        if not 0 < self.v_max_fraction <= 1:
            raise RejectedInputError(f"v_max_fraction must be in (0, 1], got {self.v_max_fraction}")


@attr.define(eq=False)
class PsoState:
    """In-flight swarm, one row per particle."""

    positions: np.ndarray
    velocities: np.ndarray
    pbest_positions: np.ndarray
    pbest_costs: np.ndarray
    gbest_position: np.ndarray
    gbest_cost: float


class ParticleSwarm(SwarmOptimizer):
    """Global best particle swarm over repaired dispatch vectors.

    Parameters
    ----------
    problem : EldProblem
        The problem to optimise.
    config : PsoConfig
        Swarm settings.
    rng : RngStream
        The random stream owned by this run.

    """

    name = "pso"

    def __init__(self, problem: EldProblem, config: PsoConfig, rng: RngStream) -> None:
        super().__init__(problem, config, rng)
        self._state: PsoState | None = None
        self._v_max = config.v_max_fraction * problem.span

    @property
    def config(self) -> PsoConfig:
        """The swarm settings."""
        return self._config  # type: ignore

    @property
    def v_max(self) -> np.ndarray:
        """Velocity limit per dimension in MW per iteration."""
        return self._v_max

    @property
    def state(self) -> PsoState:
        """The current swarm."""
        if self._state is None:
            raise OptimizerStateError("Swarm must be initialised to access its state")

        return self._state

    @state.setter
    def state(self, value: PsoState) -> None:
        self._state = value

    @property
    def best(self) -> tuple[np.ndarray, float]:
        return self.state.gbest_position, self.state.gbest_cost

    def init_swarm(self) -> PsoState:
        """Scatter the particles uniformly within the unit limits and repair them.

        Velocities are drawn uniformly within the velocity limits and every particle's best is its
        starting position.

        Returns
        -------
        PsoState
            The initial swarm.

        """
        size = self.config.swarm_size
        positions, costs = self.admit(self.problem.random_outputs(self.rng, size))
        velocities = self.rng.uniform(-self._v_max, self._v_max, (size, self.problem.n_units))

        # argmin returns the lowest index on ties
        best = int(np.argmin(costs))

        self._state = PsoState(
            positions=positions,
            velocities=velocities,
            pbest_positions=positions.copy(),
            pbest_costs=costs.copy(),
            gbest_position=positions[best].copy(),
            gbest_cost=float(costs[best]),
        )
        return self._state

    def update_velocity(self) -> np.ndarray:
        """Apply the inertia, cognitive and social terms, then clamp to the velocity limits.

        A separate uniform draw is taken for every particle, dimension and term.

        Returns
        -------
        np.ndarray
            The new velocities.

        """
        state = self.state
        shape = state.positions.shape
        r1 = self.rng.random(shape)
        r2 = self.rng.random(shape)

        velocities = (
            self.config.w * state.velocities
            + self.config.c1 * r1 * (state.pbest_positions - state.positions)
            + self.config.c2 * r2 * (state.gbest_position - state.positions)
        )
        state.velocities = np.clip(velocities, -self._v_max, self._v_max)
        return state.velocities

    def update_position(self) -> np.ndarray:
        """Move every particle by its velocity, repair it and refresh the personal and global bests.

        Bests only change on strict improvement.

        Returns
        -------
        np.ndarray
            The new positions.

        """
        state = self.state
        positions, costs = self.admit(state.positions + state.velocities)
        state.positions = positions

        improved = costs < state.pbest_costs
        state.pbest_positions[improved] = positions[improved]
        state.pbest_costs[improved] = costs[improved]

        best = int(np.argmin(state.pbest_costs))
        if state.pbest_costs[best] < state.gbest_cost:
            state.gbest_position = state.pbest_positions[best].copy()
            state.gbest_cost = float(state.pbest_costs[best])

        return positions

    def _initialise(self) -> None:
        self.init_swarm()

    def _iterate(self) -> None:
        self.update_velocity()
        self.update_position()


def run_pso(problem: EldProblem, config: PsoConfig | None = None, seed: int = Config.SEED_BASE) -> RunReport:
    """Run a particle swarm on a problem with a fresh seeded stream.

    Parameters
    ----------
    problem : EldProblem
        The problem to optimise.
    config : PsoConfig, optional
        Swarm settings, defaults to the configured defaults.
    seed : int
        Seed for the run's random stream.

    Returns
    -------
    RunReport
        The result of the run.

    """
    return ParticleSwarm(problem, config or PsoConfig(), RngStream(seed)).run()


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

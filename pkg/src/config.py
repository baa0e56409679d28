class Config:
    # Root logger level, --verbose switches to DEBUG
    LOG_LEVEL: str = "INFO"

    # Results are written here unless --out is given
    OUTPUT_DIR: str = "results"

    # Seeded runs per algorithm, timing is averaged over all of them
    TIMING_RUNS: int = 100

    # Seed for run r is SEED_BASE + r
    SEED_BASE: int = 2012

    # Default constraint handling for all optimizers, "repair" or "penalty"
    CONSTRAINT_HANDLING: str = "repair"
    PENALTY: float = 1e4

    # Stopping rule shared by PSO and ABC
    MAX_ITERATIONS: int = 200
    STAGNATION_WINDOW: int = 20
    IMPROVEMENT_EPSILON: float = 1e-6

    # Particle swarm
    PSO_SWARM_SIZE: int = 20
    PSO_W: float = 0.7
    PSO_C1: float = 1.5
    PSO_C2: float = 1.5
    PSO_V_MAX_FRACTION: float = 0.5

    # Bee colony, limit defaults to colony size times the number of units when None
    ABC_COLONY_SIZE: int = 10
    ABC_LIMIT: int | None = None

    # Bacterial foraging, step size defaults to a tenth of the narrowest unit range when None
    BFO_BACTERIA: int = 10
    BFO_CHEMOTACTIC: int = 25
    BFO_SWIM: int = 4
    BFO_REPRODUCTION: int = 4
    BFO_ELIMINATION: int = 2
    BFO_P_ED: float = 0.25
    BFO_STEP_SIZE: float | None = None


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

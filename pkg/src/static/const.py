__all__ = [
    "ALGORITHMS",
    "COMPARISON_CSV_NAME",
    "COMPARISON_TEXT_NAME",
    "CONVERGENCE_MARGIN",
    "EXIT_INPUT_ERROR",
    "EXIT_OUTPUT_ERROR",
    "EXIT_SUCCESS",
    "EXIT_USAGE_ERROR",
    "MAX_REPAIR_PASSES",
    "ORACLE_MAX_ITERATIONS",
    "ORACLE_TOLERANCE",
    "REFERENCE_COST_TOLERANCE",
    "REPAIR_TOLERANCE",
    "RUN_TRACE_CSV_TEMPLATE",
    "TRACE_CSV_TEMPLATE",
]

# Balance residual (MW) accepted as feasible after repair
REPAIR_TOLERANCE: float = 1e-6
MAX_REPAIR_PASSES: int = 100

# Lambda iteration
ORACLE_TOLERANCE: float = 1e-7
ORACLE_MAX_ITERATIONS: int = 200

# Relative distance to the oracle cost that counts as converged (0.1%)
CONVERGENCE_MARGIN: float = 1e-3

# Oracle cost vs the published reference cost ($/h)
REFERENCE_COST_TOLERANCE: float = 2.0

ALGORITHMS: tuple[str, ...] = ("pso", "abc", "bfo")

COMPARISON_CSV_NAME: str = "comparison.csv"
COMPARISON_TEXT_NAME: str = "comparison.txt"
TRACE_CSV_TEMPLATE: str = "trace_{algorithm}.csv"
RUN_TRACE_CSV_TEMPLATE: str = "traces/trace_{algorithm}_{seed}.csv"

EXIT_SUCCESS: int = 0
EXIT_USAGE_ERROR: int = 1
EXIT_INPUT_ERROR: int = 2
EXIT_OUTPUT_ERROR: int = 3


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

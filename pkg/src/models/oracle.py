from __future__ import annotations

__all__ = ["OracleSolution", "solve"]

import logging
import math

import attr
import numpy as np

from src.models.errors import RejectedInputError
from src.models.problem import Dispatch, EldProblem, evaluate_cost
from src.static import ORACLE_MAX_ITERATIONS, ORACLE_TOLERANCE

logger = logging.getLogger(__name__)


@attr.define(frozen=True)
class OracleSolution:
    """Exact equal incremental cost dispatch of a strictly convex problem."""

    dispatch: Dispatch
    """The optimal dispatch."""

    lambda_: float
    """The shared incremental cost in $/MWh."""

    cost: float
    """Fuel cost of the dispatch in $/h."""

    binding_units: frozenset[int]
    """Indices of units pinned at one of their limits."""

    iterations: int = 0
    """Bisection steps performed."""


def _clamped_outputs(problem: EldProblem, lambda_: float) -> np.ndarray:
    return np.clip((lambda_ - problem.b) / (2 * problem.a), problem.lower, problem.upper)


def solve(
    problem: EldProblem,
    tol: float = ORACLE_TOLERANCE,
    max_iterations: int = ORACLE_MAX_ITERATIONS,
) -> OracleSolution:
    """Solve a problem exactly by lambda iteration.

    Bisects the incremental cost over the bracket spanned by the units' incremental costs at their
    limits. Each trial lambda sets every unit to the clamped output where its incremental cost
    equals lambda, the total output being monotone in lambda.

    Parameters
    ----------
    problem : EldProblem
        A feasible problem whose units all have a > 0.
    tol : float
        Accepted absolute balance residual in MW, defaults to 1e-7.
    max_iterations : int
        Maximum number of bisection steps, defaults to 200.

    Returns
    -------
    OracleSolution
        The optimal dispatch, its lambda, cost and the units pinned at a limit.

    Raises
    ------
    InfeasibilityError
        If the demand is outside the fleet's total output range.
    RejectedInputError
        If any unit has a zero quadratic coefficient.

    """
    problem.check_feasible()

    if np.any(problem.a <= 0):
        flat = [i for i, g in enumerate(problem.generators) if g.a <= 0]
        raise RejectedInputError(f"Lambda iteration needs strictly convex units, units {flat} have a = 0")

    low = float(np.min(2 * problem.a * problem.lower + problem.b))
    high = float(np.max(2 * problem.a * problem.upper + problem.b))
    lambda_ = (low + high) / 2
    outputs = _clamped_outputs(problem, lambda_)
    residual = math.fsum(outputs) - problem.demand
    iterations = 0

    while abs(residual) > tol and iterations < max_iterations:
        if residual > 0:
            high = lambda_
        else:
            low = lambda_

        lambda_ = (low + high) / 2
        outputs = _clamped_outputs(problem, lambda_)
        residual = math.fsum(outputs) - problem.demand
        iterations += 1

    if abs(residual) > tol:
        logger.warning(f"Lambda iteration on {problem.name} stopped at {iterations} steps with {residual} MW left")

    unclamped = (lambda_ - problem.b) / (2 * problem.a)
    pinned = (unclamped <= problem.lower) | (unclamped >= problem.upper)

    # Settle the last sub-tolerance residual on the interior units
    interior = ~pinned
    if interior.any():
        outputs = outputs.copy()
        outputs[interior] -= residual / interior.sum()
        outputs = np.clip(outputs, problem.lower, problem.upper)

    dispatch = Dispatch(outputs)
    logger.debug(f"Lambda iteration on {problem.name} converged in {iterations} steps at lambda {lambda_}")

    return OracleSolution(
        dispatch=dispatch,
        lambda_=lambda_,
        cost=evaluate_cost(problem, dispatch),
        binding_units=frozenset(int(i) for i in np.flatnonzero(pinned)),
        iterations=iterations,
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

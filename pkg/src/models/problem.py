from __future__ import annotations

__all__ = [
    "Dispatch",
    "EldProblem",
    "Evaluation",
    "Generator",
    "RepairResult",
    "batch_cost",
    "batch_penalized",
    "batch_repair",
    "builtin_problem",
    "builtin_problem_ids",
    "evaluate",
    "evaluate_cost",
    "limit_violation",
    "penalized_objective",
    "power_balance_residual",
    "repair_dispatch",
    "within_limits",
]

import logging
import math
import typing as t

import attr
import numpy as np

from src.models.errors import InfeasibilityError, RejectedInputError
from src.static import BUILTIN_PROBLEMS, MAX_REPAIR_PASSES, REPAIR_TOLERANCE

logger = logging.getLogger(__name__)


def _as_float_tuple(values: t.Iterable[float]) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


def _frozen_array(values: t.Iterable[float]) -> np.ndarray:
    array = np.array(list(values), dtype=float)
    array.setflags(write=False)
    return array


@attr.define(frozen=True)
class Generator:
    """A generating unit with output limits and a quadratic fuel cost curve."""

    p_min: float = attr.field(converter=float)
    """Minimum output in MW."""

    p_max: float = attr.field(converter=float)
    """Maximum output in MW."""

    a: float = attr.field(converter=float)
    """Quadratic cost coefficient in $/MW²h."""

    b: float = attr.field(converter=float)
    """Linear cost coefficient in $/MWh."""

    c: float = attr.field(converter=float)
    """Constant cost coefficient in $/h."""

    def __attrs_post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.p_min, self.p_max, self.a, self.b, self.c)):
            raise RejectedInputError(f"Generator values must be finite, got {self}")

        if self.p_min >= self.p_max:
            raise RejectedInputError(f"Generator p_min ({self.p_min}) must be below p_max ({self.p_max})")

        if self.a < 0:
            raise RejectedInputError(f"Generator quadratic coefficient must be non-negative, got {self.a}")

    @property
    def range(self) -> float:
        """Width of the operating range in MW."""
        return self.p_max - self.p_min

    def cost(self, output: float) -> float:
        """Fuel cost in $/h at an output in MW."""
        return self.a * output * output + self.b * output + self.c

    def incremental_cost(self, output: float) -> float:
        """Derivative of the fuel cost in $/MWh at an output in MW."""
        return 2 * self.a * output + self.b


@attr.define(frozen=True)
class EldProblem:
    """An economic load dispatch problem: a fleet of generators sharing one demand.

    The problem may be constructed with a demand the fleet cannot meet, operations that need
    a feasible problem raise `InfeasibilityError` in that case.
    """

    generators: tuple[Generator, ...] = attr.field(converter=tuple)
    """The generating units, in order."""

    demand: float = attr.field(converter=float)
    """Total demand in MW."""

    name: str = "custom"
    """Identifier used in reports and output files."""

    _lower: np.ndarray = attr.field(init=False, repr=False, eq=False)
    _upper: np.ndarray = attr.field(init=False, repr=False, eq=False)
    _a: np.ndarray = attr.field(init=False, repr=False, eq=False)
    _b: np.ndarray = attr.field(init=False, repr=False, eq=False)
    _c: np.ndarray = attr.field(init=False, repr=False, eq=False)

    def __attrs_post_init__(self) -> None:
        if len(self.generators) < 1:
            raise RejectedInputError("A problem needs at least one generator")

        if not all(isinstance(g, Generator) for g in self.generators):
            raise RejectedInputError("Problem generators must be Generator instances")

        if not math.isfinite(self.demand):
            raise RejectedInputError(f"Demand must be finite, got {self.demand}")

        object.__setattr__(self, "_lower", _frozen_array(g.p_min for g in self.generators))
        object.__setattr__(self, "_upper", _frozen_array(g.p_max for g in self.generators))
        object.__setattr__(self, "_a", _frozen_array(g.a for g in self.generators))
        object.__setattr__(self, "_b", _frozen_array(g.b for g in self.generators))
        object.__setattr__(self, "_c", _frozen_array(g.c for g in self.generators))

    @property
    def n_units(self) -> int:
        """The number of generating units."""
        return len(self.generators)

    @property
    def lower(self) -> np.ndarray:
        """Read-only array of unit minimum outputs in MW."""
        return self._lower

    @property
    def upper(self) -> np.ndarray:
        """Read-only array of unit maximum outputs in MW."""
        return self._upper

    @property
    def span(self) -> np.ndarray:
        """Array of unit operating range widths in MW."""
        return self._upper - self._lower

    @property
    def a(self) -> np.ndarray:
        """Read-only array of quadratic cost coefficients."""
        return self._a

    @property
    def b(self) -> np.ndarray:
        """Read-only array of linear cost coefficients."""
        return self._b

    @property
    def c(self) -> np.ndarray:
        """Read-only array of constant cost coefficients."""
        return self._c

    @property
    def min_total(self) -> float:
        """The smallest total output the fleet can produce."""
        return float(self._lower.sum())

    @property
    def max_total(self) -> float:
        """The largest total output the fleet can produce."""
        return float(self._upper.sum())

    @property
    def is_feasible(self) -> bool:
        """Whether the demand lies within the fleet's total output range."""
        return self.min_total - REPAIR_TOLERANCE <= self.demand <= self.max_total + REPAIR_TOLERANCE

    def check_feasible(self) -> None:
        """Raise `InfeasibilityError` if the demand cannot be met."""
        if not self.is_feasible:
            raise InfeasibilityError(
                f"Demand {self.demand} MW of problem {self.name} is outside "
                f"[{self.min_total}, {self.max_total}] MW"
            )

    def random_outputs(self, rng: t.Any, count: int) -> np.ndarray:
        """Draw `count` output vectors uniformly within the unit limits (not repaired).

        Parameters
        ----------
        rng : RngStream
            The random stream to draw from.
        count : int
            The number of vectors to draw.

        Returns
        -------
        np.ndarray
            Array of shape (count, n_units).

        """
        return rng.uniform(self._lower, self._upper, (count, self.n_units))


@attr.define(frozen=True)
class Dispatch:
    """A candidate output vector in MW, one value per generating unit."""

    outputs: tuple[float, ...] = attr.field(converter=_as_float_tuple)
    """Unit outputs in MW."""

    def __attrs_post_init__(self) -> None:
        if not all(math.isfinite(v) for v in self.outputs):
            raise RejectedInputError(f"Dispatch outputs must be finite, got {self.outputs}")

    def __len__(self) -> int:
        return len(self.outputs)

    def __iter__(self) -> t.Iterator[float]:
        return iter(self.outputs)

    def __getitem__(self, index: int) -> float:
        return self.outputs[index]

    @property
    def total(self) -> float:
        """Total output in MW."""
        return math.fsum(self.outputs)

    def as_array(self) -> np.ndarray:
        """A writable copy of the outputs as a numpy array."""
        return np.array(self.outputs, dtype=float)


@attr.define(frozen=True)
class Evaluation:
    """Cost and constraint diagnostics for one dispatch."""

    cost: float
    """Fuel cost in $/h, regardless of feasibility."""

    balance_residual: float
    """Total output minus demand in MW."""

    limit_violation: float
    """Total magnitude by which outputs leave their limits in MW."""

    @property
    def feasible(self) -> bool:
        """Whether both constraints hold within the repair tolerance."""
        return abs(self.balance_residual) <= REPAIR_TOLERANCE and self.limit_violation <= REPAIR_TOLERANCE


@attr.define(frozen=True)
class RepairResult:
    """Outcome of projecting a dispatch onto the feasible set."""

    dispatch: Dispatch
    """The repaired dispatch, best effort if `converged` is False."""

    residual: float
    """Remaining balance residual in MW."""

    passes: int
    """Number of redistribution passes performed."""

    converged: bool
    """Whether the residual ended within the repair tolerance."""


def _outputs(problem: EldProblem, d: Dispatch) -> np.ndarray:
    if len(d) != problem.n_units:
        raise RejectedInputError(f"Dispatch has {len(d)} outputs but problem {problem.name} has {problem.n_units} units")

    return d.as_array()


def evaluate_cost(problem: EldProblem, d: Dispatch) -> float:
    """Total fuel cost of a dispatch in $/h.

    Parameters
    ----------
    problem : EldProblem
        The problem supplying the cost coefficients.
    d : Dispatch
        The dispatch to cost.

    Returns
    -------
    float
        Sum over units of a·P² + b·P + c.

    Raises
    ------
    RejectedInputError
        If the dispatch length does not match the number of units.

    """
    p = _outputs(problem, d)
    return float(np.sum(problem.a * p * p + problem.b * p + problem.c))


def power_balance_residual(problem: EldProblem, d: Dispatch) -> float:
    """Signed difference between total output and demand in MW."""
    p = _outputs(problem, d)
    return math.fsum(p) - problem.demand


def limit_violation(problem: EldProblem, d: Dispatch) -> float:
    """Total magnitude in MW by which outputs leave their closed limits."""
    p = _outputs(problem, d)
    below = np.maximum(problem.lower - p, 0.0)
    above = np.maximum(p - problem.upper, 0.0)
    return float(below.sum() + above.sum())


def within_limits(problem: EldProblem, d: Dispatch) -> bool:
    """Whether every output lies within its closed interval [p_min, p_max]."""
    p = _outputs(problem, d)
    return bool(np.all((p >= problem.lower) & (p <= problem.upper)))


def evaluate(problem: EldProblem, d: Dispatch) -> Evaluation:
    """Cost a dispatch and measure both constraint violations."""
    return Evaluation(
        cost=evaluate_cost(problem, d),
        balance_residual=power_balance_residual(problem, d),
        limit_violation=limit_violation(problem, d),
    )


def penalized_objective(problem: EldProblem, d: Dispatch, penalty: float) -> float:
    """Fuel cost plus a quadratic penalty on both constraint violations.

    Parameters
    ----------
    problem : EldProblem
        The problem to evaluate against.
    d : Dispatch
        The dispatch to evaluate.
    penalty : float
        Non-negative penalty coefficient applied to the squared violations.

    Returns
    -------
    float
        cost + penalty·(balance_residual² + limit_violation²).

    """
    if penalty < 0:
        raise RejectedInputError(f"Penalty must be non-negative, got {penalty}")

    evaluation = evaluate(problem, d)
    return evaluation.cost + penalty * (evaluation.balance_residual**2 + evaluation.limit_violation**2)


def batch_cost(problem: EldProblem, outputs: np.ndarray) -> np.ndarray:
    """Fuel cost of every row of an (m, n_units) output matrix."""
    return np.sum(problem.a * outputs * outputs + problem.b * outputs + problem.c, axis=-1)


def batch_penalized(problem: EldProblem, outputs: np.ndarray, penalty: float) -> np.ndarray:
    """Penalised objective of every row of an (m, n_units) output matrix."""
    residual = outputs.sum(axis=-1) - problem.demand
    violation = np.sum(np.maximum(problem.lower - outputs, 0.0) + np.maximum(outputs - problem.upper, 0.0), axis=-1)
    return batch_cost(problem, outputs) + penalty * (residual * residual + violation * violation)


def batch_repair(
    problem: EldProblem,
    outputs: np.ndarray,
    tolerance: float = REPAIR_TOLERANCE,
    max_passes: int = MAX_REPAIR_PASSES,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Clamp every row to the unit limits and spread its balance residual over the unpinned units.

    Rows already within tolerance after clamping are left untouched, so repairing a repaired
    matrix is a no-op.

    Parameters
    ----------
    problem : EldProblem
        The problem supplying limits and demand, must be feasible.
    outputs : np.ndarray
        Matrix of shape (m, n_units), not modified.
    tolerance : float
        Accepted absolute balance residual in MW.
    max_passes : int
        Maximum number of redistribution passes.

    Returns
    -------
    tuple[np.ndarray, np.ndarray, int]
        The repaired matrix, the remaining residual per row and the passes performed.

    Raises
    ------
    InfeasibilityError
        If the demand is outside the fleet's total output range.

    """
    problem.check_feasible()

    x = np.clip(np.atleast_2d(np.asarray(outputs, dtype=float)), problem.lower, problem.upper)
    residual = x.sum(axis=1) - problem.demand
    passes = 0

    while passes < max_passes:
        pending = np.abs(residual) > tolerance
        if not pending.any():
            break

        # Units that can still move in the direction that reduces the residual
        free = np.where((residual > 0)[:, None], x > problem.lower, x < problem.upper) & pending[:, None]
        n_free = free.sum(axis=1)
        share = np.divide(residual, n_free, out=np.zeros_like(residual), where=n_free > 0)

        x = np.clip(x - share[:, None] * free, problem.lower, problem.upper)
        residual = x.sum(axis=1) - problem.demand
        passes += 1

    return x, residual, passes


def repair_dispatch(
    problem: EldProblem,
    raw: Dispatch,
    tolerance: float = REPAIR_TOLERANCE,
    max_passes: int = MAX_REPAIR_PASSES,
) -> RepairResult:
    """Project a dispatch onto the feasible set.

    Outputs are clamped to their limits, then the balance residual is split evenly over the units
    not pinned at the bound it pushes towards, re-clamping and repeating until the residual is
    within tolerance. Unit order is preserved.

    Parameters
    ----------
    problem : EldProblem
        The problem to repair against.
    raw : Dispatch
        The dispatch to repair.
    tolerance : float
        Accepted absolute balance residual in MW, defaults to 1e-6.
    max_passes : int
        Maximum number of redistribution passes, defaults to 100.

    Returns
    -------
    RepairResult
        The repaired dispatch, flagged with its residual if the passes ran out.

    Raises
    ------
    InfeasibilityError
        If the demand is outside the fleet's total output range.
    RejectedInputError
        If the dispatch length does not match the number of units.

    """
    p = _outputs(problem, raw)
    repaired, residual, passes = batch_repair(problem, p, tolerance, max_passes)
    remaining = float(residual[0])
    converged = abs(remaining) <= tolerance

    if not converged:
        logger.warning(f"Repair of a {problem.name} dispatch stopped after {passes} passes with {remaining} MW left")

    logger.debug(f"Repaired {problem.name} dispatch in {passes} passes")
    return RepairResult(Dispatch(repaired[0]), remaining, passes, converged)


def builtin_problem_ids() -> list[str]:
    """The identifiers accepted by `builtin_problem`."""
    return list(BUILTIN_PROBLEMS)


def builtin_problem(problem_id: str) -> EldProblem:
    """Build one of the bundled benchmark problems.

    Parameters
    ----------
    problem_id : str
        One of problem1, problem2-printed or problem2-corrected.

    Returns
    -------
    EldProblem
        The problem with its tabulated coefficients.

    Raises
    ------
    RejectedInputError
        If the identifier is unknown.

    """
    data = BUILTIN_PROBLEMS.get(problem_id)

    if data is None:
        raise RejectedInputError(
            f"Unknown problem '{problem_id}', expected one of: {', '.join(builtin_problem_ids())}"
        )

    return EldProblem(
        generators=[Generator(*row) for row in data["generators"]],
        demand=data["demand"],
        name=problem_id,
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

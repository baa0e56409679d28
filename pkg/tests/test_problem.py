from __future__ import annotations

import numpy as np
import pytest

from src.models import (
    Dispatch,
    EldProblem,
    Generator,
    InfeasibilityError,
    RejectedInputError,
    batch_repair,
    builtin_problem,
    builtin_problem_ids,
    evaluate,
    evaluate_cost,
    limit_violation,
    penalized_objective,
    power_balance_residual,
    repair_dispatch,
    within_limits,
)
from src.static import REPAIR_TOLERANCE


class TestGenerator:
    def test_rejects_empty_range(self):
        with pytest.raises(RejectedInputError):
            Generator(100, 100, 0.004, 5.3, 500)

    def test_rejects_negative_quadratic(self):
        with pytest.raises(RejectedInputError):
            Generator(100, 200, -0.001, 5.3, 500)

    def test_rejects_non_finite(self):
        with pytest.raises(RejectedInputError):
            Generator(100, 200, float("nan"), 5.3, 500)

    def test_incremental_cost_matches_finite_difference(self):
        rng = np.random.default_rng(11)
        h = 1e-3

        for _ in range(100):
            p_min = rng.uniform(10, 100)
            unit = Generator(p_min, p_min + rng.uniform(50, 300), rng.uniform(0, 0.01), rng.uniform(1, 10), 100)
            p = rng.uniform(unit.p_min, unit.p_max)
            numeric = (unit.cost(p + h) - unit.cost(p - h)) / (2 * h)
            assert unit.incremental_cost(p) == pytest.approx(numeric, rel=1e-6)


class TestBuiltinProblems:
    def test_ids(self):
        assert builtin_problem_ids() == ["problem1", "problem2-printed", "problem2-corrected"]

    def test_problem1(self, problem1):
        assert problem1.n_units == 3
        assert problem1.demand == 975
        assert problem1.generators[0] == Generator(200, 450, 0.004, 5.3, 500)

    def test_problem2_printed(self, problem2_printed):
        assert problem2_printed.generators[2] == Generator(50, 200, 0.0048, 7.97, 78)

    def test_problem2_corrected(self, problem2):
        assert problem2.generators[0].a == 0.001562

    def test_unknown_id(self):
        with pytest.raises(RejectedInputError, match="problem3"):
            builtin_problem("problem3")


class TestEldProblem:
    def test_arrays_are_read_only(self, problem1):
        with pytest.raises(ValueError):
            problem1.lower[0] = 0

    def test_totals(self, problem1):
        assert problem1.min_total == 450
        assert problem1.max_total == 1125
        assert problem1.is_feasible

    def test_infeasible_demand(self):
        problem = EldProblem([Generator(0, 100, 0.01, 1, 0), Generator(0, 100, 0.01, 1, 0)], 250)
        assert not problem.is_feasible

        with pytest.raises(InfeasibilityError):
            problem.check_feasible()

    def test_needs_a_generator(self):
        with pytest.raises(RejectedInputError):
            EldProblem([], 100)


class TestCost:
    def test_problem1_reference_dispatch(self, problem1):
        assert evaluate_cost(problem1, Dispatch((450, 325, 200))) == pytest.approx(8236.25, abs=1e-9)

    def test_constant_only_costs(self):
        problem = EldProblem([Generator(0, 100, 0, 0, 120), Generator(0, 50, 0, 0, 80)], 60)
        assert evaluate_cost(problem, Dispatch((37.5, 22.5))) == pytest.approx(200)

    def test_dimension_mismatch(self, problem1):
        with pytest.raises(RejectedInputError):
            evaluate_cost(problem1, Dispatch((450, 525)))

    def test_dispatch_rejects_non_finite(self):
        with pytest.raises(RejectedInputError):
            Dispatch((1.0, float("inf")))


class TestConstraints:
    @pytest.mark.parametrize(
        ("outputs", "expected"),
        [((450, 325, 200), 0.0), ((450, 325, 201), 1.0)],
    )
    def test_balance_residual(self, problem1, outputs, expected):
        assert power_balance_residual(problem1, Dispatch(outputs)) == pytest.approx(expected)

    def test_balance_residual_zero_demand(self):
        problem = EldProblem([Generator(0, 10, 0.1, 1, 0), Generator(0, 10, 0.1, 1, 0)], 0)
        assert power_balance_residual(problem, Dispatch((0, 0))) == 0

    @pytest.mark.parametrize(
        ("outputs", "expected"),
        [((450, 325, 200), True), ((451, 325, 199), False), ((200, 150, 100), True)],
    )
    def test_within_limits(self, problem1, outputs, expected):
        assert within_limits(problem1, Dispatch(outputs)) is expected

    def test_limit_violation(self, problem1):
        assert limit_violation(problem1, Dispatch((451, 140, 200))) == pytest.approx(11)

    def test_evaluate(self, problem1):
        evaluation = evaluate(problem1, Dispatch((450, 325, 201)))
        assert evaluation.balance_residual == pytest.approx(1)
        assert evaluation.limit_violation == 0
        assert not evaluation.feasible
        assert evaluate(problem1, Dispatch((450, 325, 200))).feasible

    def test_dimension_mismatch(self, problem1):
        for check in (power_balance_residual, within_limits, limit_violation):
            with pytest.raises(RejectedInputError):
                check(problem1, Dispatch((1, 2, 3, 4)))


class TestPenalizedObjective:
    def test_feasible_dispatch_is_unpenalised(self, problem1):
        d = Dispatch((450, 325, 200))
        assert penalized_objective(problem1, d, 1e6) == evaluate_cost(problem1, d)

    def test_zero_penalty(self, problem1):
        d = Dispatch((460, 100, 200))
        assert penalized_objective(problem1, d, 0) == evaluate_cost(problem1, d)

    def test_balance_violation(self, problem1):
        d = Dispatch((450, 325, 201))
        assert penalized_objective(problem1, d, 1000) == pytest.approx(evaluate_cost(problem1, d) + 1000)

    def test_negative_penalty(self, problem1):
        with pytest.raises(RejectedInputError):
            penalized_objective(problem1, Dispatch((450, 325, 200)), -1)

    @pytest.mark.parametrize("seed", range(20))
    def test_bounds_cost_and_equals_it_only_when_feasible(self, make_problem, seed):
        rng = np.random.default_rng(seed)
        problem = make_problem(rng, int(rng.integers(2, 8)))
        raw = rng.uniform(problem.lower - problem.span, problem.upper + problem.span, (25, problem.n_units))
        repaired, _, _ = batch_repair(problem, raw)

        for outputs in raw:
            d = Dispatch(outputs)
            cost, value = evaluate_cost(problem, d), penalized_objective(problem, d, 1e4)
            if evaluate(problem, d).feasible:
                assert value == pytest.approx(cost, rel=1e-9)
            else:
                assert value > cost

        for outputs in repaired:
            d = Dispatch(outputs)
            assert penalized_objective(problem, d, 1e4) == pytest.approx(evaluate_cost(problem, d), rel=1e-9)


class TestRepair:
    def test_feasible_dispatch_unchanged(self, problem1):
        result = repair_dispatch(problem1, Dispatch((450, 325, 200)))
        assert result.dispatch == Dispatch((450, 325, 200))
        assert result.passes == 0
        assert result.converged

    def test_clamps_and_balances(self, problem1):
        result = repair_dispatch(problem1, Dispatch((460, 325, 200)))
        assert result.dispatch[0] == 450
        assert within_limits(problem1, result.dispatch)
        assert abs(power_balance_residual(problem1, result.dispatch)) <= REPAIR_TOLERANCE

    def test_symmetric_redistribution(self, two_units):
        result = repair_dispatch(two_units, Dispatch((0, 0)))
        assert result.dispatch.outputs == pytest.approx((50, 50))

    def test_single_unit_takes_demand(self, single_unit):
        assert repair_dispatch(single_unit, Dispatch((400,))).dispatch[0] == pytest.approx(250)

    def test_infeasible_problem(self):
        problem = EldProblem([Generator(0, 100, 0.01, 1, 0)], 150)

        with pytest.raises(InfeasibilityError):
            repair_dispatch(problem, Dispatch((50,)))

    def test_out_of_passes_is_flagged(self, two_units):
        result = repair_dispatch(two_units, Dispatch((0, 0)), max_passes=0)
        assert not result.converged
        assert result.residual == pytest.approx(-100)
        assert result.dispatch == Dispatch((0, 0))

    def test_random_dispatches_are_repaired_feasible_and_idempotent(self, make_problem):
        rng = np.random.default_rng(2012)

        for _ in range(100):
            problem = make_problem(rng, int(rng.integers(2, 11)))
            raw = rng.uniform(problem.lower - problem.span, problem.upper + problem.span, (10, problem.n_units))
            repaired, residual, _ = batch_repair(problem, raw)

            assert np.all(np.abs(residual) <= REPAIR_TOLERANCE)
            assert np.all(repaired >= problem.lower) and np.all(repaired <= problem.upper)

            again, _, passes = batch_repair(problem, repaired)
            assert passes == 0
            np.testing.assert_array_equal(again, repaired)

    def test_batch_matches_single(self, problem1):
        raw = np.array([[460, 100, 200], [300, 300, 300]], dtype=float)
        repaired, _, _ = batch_repair(problem1, raw)

        for row, expected in zip(raw, repaired, strict=True):
            assert repair_dispatch(problem1, Dispatch(row)).dispatch.outputs == pytest.approx(tuple(expected))

from __future__ import annotations

import numpy as np
import pytest

from src.models import (
    ConvergenceTrace,
    EldProblem,
    Generator,
    InfeasibilityError,
    OptimizerConfig,
    ParticleSwarm,
    PsoConfig,
    RejectedInputError,
    RngStream,
    StopCriteria,
    evaluate_cost,
    power_balance_residual,
    run_pso,
    should_stop,
    within_limits,
)
from src.static import REPAIR_TOLERANCE


def trace_of(*costs: float) -> ConvergenceTrace:
    trace = ConvergenceTrace()
    for i, cost in enumerate(costs, 1):
        trace.record(cost, 10 * i)
    return trace


class TestRngStream:
    def test_same_seed_same_draws(self):
        a, b = RngStream(42), RngStream(42)
        np.testing.assert_array_equal(a.uniform(0, 1, 5), b.uniform(0, 1, 5))
        assert a.integers(0, 100) == b.integers(0, 100)

    def test_different_seeds_differ(self):
        assert not np.array_equal(RngStream(1).random(5), RngStream(2).random(5))

    @pytest.mark.parametrize("seed", [-1, 2**64])
    def test_rejects_seed_outside_u64(self, seed):
        with pytest.raises(RejectedInputError):
            RngStream(seed)

    def test_counts_draw_calls(self):
        rng = RngStream(0)
        rng.random(3)
        rng.uniform(0, 1)
        rng.integers(0, 2)
        assert rng.draws == 3

    def test_roulette_only_picks_weighted_indices(self):
        rng = RngStream(3)
        assert {rng.roulette(np.array([0.0, 1.0, 0.0])) for _ in range(50)} == {1}

    def test_roulette_frequencies(self):
        rng = RngStream(5)
        picks = np.bincount([rng.roulette(np.array([0.75, 0.25])) for _ in range(4000)], minlength=2)
        assert picks[0] / 4000 == pytest.approx(0.75, abs=0.03)


class TestStopCriteria:
    def test_rejects_zero_iterations(self):
        with pytest.raises(RejectedInputError):
            StopCriteria(max_iterations=0)

    def test_rejects_negative_window(self):
        with pytest.raises(RejectedInputError):
            StopCriteria(stagnation_window=-1)

    def test_iteration_cap(self):
        assert should_stop(StopCriteria(max_iterations=50), trace_of(10.0), 50)

    def test_target_cost(self):
        criteria = StopCriteria(max_iterations=1000, target_cost=8237)
        assert should_stop(criteria, trace_of(8300.0, 8236.25), 2)

    def test_fresh_trace(self):
        criteria = StopCriteria(max_iterations=1000, stagnation_window=5)
        assert not should_stop(criteria, trace_of(9000.0), 1)

    def test_stagnation(self):
        criteria = StopCriteria(max_iterations=1000, stagnation_window=2, improvement_epsilon=1e-6)
        assert should_stop(criteria, trace_of(10.0, 10.0, 10.0), 3)
        assert not should_stop(criteria, trace_of(12.0, 11.0, 10.0), 3)
        assert not should_stop(criteria, trace_of(10.0, 10.0), 2)

    def test_stagnation_disabled(self):
        criteria = StopCriteria(max_iterations=1000, stagnation_window=0)
        assert not should_stop(criteria, trace_of(*[10.0] * 50), 50)


class TestConvergenceTrace:
    def test_rejects_increase(self):
        trace = trace_of(10.0)

        with pytest.raises(AssertionError):
            trace.record(11.0, 20)

    def test_iterations_and_evaluations_to_threshold(self):
        trace = trace_of(12.0, 11.0, 10.0, 10.0)
        assert trace.iterations_to(11.0) == 2
        assert trace.evaluations_to(11.0) == 20
        assert trace.iterations_to(9.0) is None
        assert trace.evaluations_to(9.0) is None
        assert trace.final_cost == 10.0
        assert len(trace) == 4


class TestOptimizerConfig:
    def test_rejects_unknown_mode(self):
        with pytest.raises(RejectedInputError):
            OptimizerConfig(constraint_handling="ignore")

    def test_rejects_negative_penalty(self):
        with pytest.raises(RejectedInputError):
            OptimizerConfig(penalty=-1.0)


class TestSwarmOptimizer:
    def test_infeasible_problem(self):
        problem = EldProblem([Generator(0, 100, 0.01, 1, 0), Generator(0, 100, 0.01, 1, 0)], 300)

        with pytest.raises(InfeasibilityError):
            ParticleSwarm(problem, PsoConfig(), RngStream(0))

    def test_report_accounting(self, problem1):
        report = run_pso(problem1, PsoConfig(stop=StopCriteria(max_iterations=10, stagnation_window=0)), seed=9)
        assert report.algorithm == "pso"
        assert report.seed == 9
        assert report.iterations_used == len(report.trace) == 10
        assert report.evaluations == 20 * 11
        assert report.trace.evaluations_per_iteration[-1] == report.evaluations
        assert report.trace.final_cost == pytest.approx(report.best_cost)
        assert report.wall_time > 0

    def test_penalty_mode_returns_feasible_dispatch(self, problem1):
        config = PsoConfig(constraint_handling="penalty", penalty=1e4)
        report = run_pso(problem1, config, seed=4)

        assert within_limits(problem1, report.best_dispatch)
        assert abs(power_balance_residual(problem1, report.best_dispatch)) <= REPAIR_TOLERANCE
        assert report.best_cost == pytest.approx(evaluate_cost(problem1, report.best_dispatch))

    def test_same_seed_same_report(self, problem2):
        first, second = run_pso(problem2, seed=123), run_pso(problem2, seed=123)
        assert first.best_dispatch == second.best_dispatch
        assert first.trace.best_cost_per_iteration == second.trace.best_cost_per_iteration

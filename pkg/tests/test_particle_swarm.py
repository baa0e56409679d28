from __future__ import annotations

import numpy as np
import pytest

from src.models import (
    EldProblem,
    Generator,
    OptimizerStateError,
    ParticleSwarm,
    PsoConfig,
    PsoState,
    RejectedInputError,
    RngStream,
    StopCriteria,
    builtin_problem,
    run_pso,
    solve,
)
from src.static import CONVERGENCE_MARGIN, REPAIR_TOLERANCE

SEEDS = range(2012, 2032)


@pytest.fixture
def wide_problem() -> EldProblem:
    return EldProblem([Generator(0, 1000, 0.01, 2, 0), Generator(0, 1000, 0.01, 2, 0)], 500)


def set_state(swarm: ParticleSwarm, position: float, velocity: float, pbest: float, gbest: float) -> PsoState:
    swarm.state = PsoState(
        positions=np.array([[position, position]]),
        velocities=np.array([[velocity, velocity]]),
        pbest_positions=np.array([[pbest, pbest]]),
        pbest_costs=np.array([0.0]),
        gbest_position=np.array([gbest, gbest]),
        gbest_cost=0.0,
    )
    return swarm.state


@pytest.fixture(scope="module")
def problem1_reports():
    return [run_pso(builtin_problem("problem1"), seed=seed) for seed in SEEDS]


@pytest.fixture(scope="module")
def problem2_reports():
    return [run_pso(builtin_problem("problem2-corrected"), seed=seed) for seed in SEEDS]


class TestPsoConfig:
    def test_defaults(self):
        config = PsoConfig()
        assert (config.swarm_size, config.w, config.c1, config.c2) == (20, 0.7, 1.5, 1.5)

    @pytest.mark.parametrize(
        "options", [{"swarm_size": 1}, {"w": -0.1}, {"c1": -1.0}, {"v_max_fraction": 0.0}, {"v_max_fraction": 1.5}]
    )
    def test_rejects_invalid(self, options):
        with pytest.raises(RejectedInputError):
            PsoConfig(**options)


class TestInitSwarm:
    def test_positions_are_feasible(self, problem1):
        state = ParticleSwarm(problem1, PsoConfig(swarm_size=20), RngStream(1)).init_swarm()
        assert state.positions.shape == (20, 3)
        assert np.all(np.abs(state.positions.sum(axis=1) - 975) <= REPAIR_TOLERANCE)

    def test_velocities_within_limits(self, problem1):
        swarm = ParticleSwarm(problem1, PsoConfig(), RngStream(1))
        state = swarm.init_swarm()
        assert np.all(np.abs(state.velocities) <= swarm.v_max)

    def test_gbest_is_best_pbest(self, problem1):
        state = ParticleSwarm(problem1, PsoConfig(), RngStream(2)).init_swarm()
        assert np.all(state.gbest_cost <= state.pbest_costs)
        assert state.gbest_cost == state.pbest_costs.min()

    def test_single_unit_has_one_feasible_point(self, single_unit):
        state = ParticleSwarm(single_unit, PsoConfig(swarm_size=2), RngStream(3)).init_swarm()
        np.testing.assert_allclose(state.positions, [[250.0], [250.0]])

    def test_state_before_init(self, problem1):
        with pytest.raises(OptimizerStateError):
            ParticleSwarm(problem1, PsoConfig(), RngStream(0)).state


class TestUpdateVelocity:
    def test_no_acceleration_keeps_velocity(self, wide_problem):
        swarm = ParticleSwarm(wide_problem, PsoConfig(w=1.0, c1=0.0, c2=0.0), RngStream(0))
        set_state(swarm, 100, 10, 150, 300)
        np.testing.assert_allclose(swarm.update_velocity(), [[10.0, 10.0]])

    def test_at_both_bests_only_inertia_remains(self, wide_problem):
        swarm = ParticleSwarm(wide_problem, PsoConfig(w=0.5), RngStream(0))
        set_state(swarm, 100, 10, 100, 100)
        np.testing.assert_allclose(swarm.update_velocity(), [[5.0, 5.0]])

    def test_pinned_draws(self, wide_problem, pinned_rng):
        swarm = ParticleSwarm(wide_problem, PsoConfig(w=0.5, c1=2.0, c2=2.0), pinned_rng.pin("random", 1.0, 1.0))
        set_state(swarm, 100, 10, 103, 105)
        np.testing.assert_allclose(swarm.update_velocity(), [[21.0, 21.0]])

    def test_clamped_to_velocity_limit(self, wide_problem, pinned_rng):
        config = PsoConfig(w=0.5, c1=2.0, c2=2.0, v_max_fraction=0.01)
        swarm = ParticleSwarm(wide_problem, config, pinned_rng.pin("random", 1.0, 1.0))
        set_state(swarm, 100, 10, 103, 105)
        np.testing.assert_allclose(swarm.update_velocity(), [[10.0, 10.0]])


class TestUpdatePosition:
    def test_zero_velocity_changes_nothing(self, problem1):
        swarm = ParticleSwarm(problem1, PsoConfig(), RngStream(5))
        state = swarm.init_swarm()
        state.velocities = np.zeros_like(state.velocities)
        before = (state.positions.copy(), state.pbest_costs.copy(), state.gbest_cost)

        swarm.update_position()

        np.testing.assert_array_equal(state.positions, before[0])
        np.testing.assert_array_equal(state.pbest_costs, before[1])
        assert state.gbest_cost == before[2]

    def test_positions_stay_feasible(self, problem1):
        swarm = ParticleSwarm(problem1, PsoConfig(), RngStream(6))
        swarm.init_swarm()

        for _ in range(10):
            swarm.update_velocity()
            positions = swarm.update_position()
            assert np.all(np.abs(positions.sum(axis=1) - 975) <= REPAIR_TOLERANCE)
            assert np.all((positions >= problem1.lower) & (positions <= problem1.upper))


class TestRun:
    def test_single_iteration(self, problem1):
        report = run_pso(problem1, PsoConfig(stop=StopCriteria(max_iterations=1)), seed=1)
        assert len(report.trace) == 1
        assert report.iterations_used == 1

    def test_trace_is_non_increasing(self, problem1_reports):
        for report in problem1_reports:
            costs = report.trace.best_cost_per_iteration
            assert all(later <= earlier for earlier, later in zip(costs, costs[1:]))

    def test_problem1_converges(self, problem1, problem1_reports):
        threshold = solve(problem1).cost * (1 + CONVERGENCE_MARGIN)
        converged = [
            report
            for report in problem1_reports
            if report.best_cost <= threshold and report.best_dispatch.outputs == pytest.approx((450, 325, 200), abs=1)
        ]
        assert len(converged) >= 18

    def test_problem2_converges(self, problem2, problem2_reports):
        oracle = solve(problem2)
        threshold = oracle.cost * (1 + CONVERGENCE_MARGIN)
        converged = [
            report
            for report in problem2_reports
            if report.best_cost <= threshold
            and report.best_dispatch.outputs == pytest.approx(oracle.dispatch.outputs, abs=1)
        ]
        assert len(converged) >= 18

    def test_best_run_matches_published_cost(self, problem2_reports):
        assert min(report.best_cost for report in problem2_reports) == pytest.approx(4652, abs=2)

"""
Tests for the low-switching epoch loop.
"""
import math

import numpy as np
import pytest

from mini_gpopt.benchmarks import CandidateGrid, Environment, ObjectiveFamily
from mini_gpopt.benchmarks.objectives import Objective
from mini_gpopt.errors import ConfigurationError, UsageError
from mini_gpopt.gp import KernelSpec, UniqueHistory, history_add, posterior_fit
from mini_gpopt.policies import (
    AcquisitionKind,
    BetaSchedule,
    FeedbackDelivery,
    batch_length,
    run_gp_ucb,
    run_mini,
)
from mini_gpopt.policies.mini_meta import threshold_batch_rule
from mini_gpopt.utils.bound_checks import within_batch_ratios

LAM = 1e-2


@pytest.fixture
def loop_kernel():
    return KernelSpec.from_squared_bandwidth(4.0)


@pytest.fixture
def ucb_schedule(small_env):
    return BetaSchedule.bayesian_ucb(card=small_env.size, delta=0.1)


class TestBatchLength:
    """Test the batch-length rule."""

    def test_direct_arithmetic(self):
        assert batch_length(0.07, 1.1, 10 ** 9) == 3

    def test_clamped_to_one(self):
        assert batch_length(1.0, 1.1, 10 ** 9) == 1

    def test_budget_truncation(self):
        assert batch_length(0.11, 1.2, 2) == 2

    def test_zero_variance_uses_remaining_budget(self):
        assert batch_length(0.0, 1.1, 17) == 17

    def test_clamp_flag(self):
        rule = threshold_batch_rule(1.1)
        assert rule(1.0, 100) == (1, True)
        assert rule(0.07, 100) == (3, False)

    def test_variance_measured_in_lambda_units(self):
        rule = threshold_batch_rule(1.1, lam=0.5)
        assert rule(0.035, 100) == (3, False)
        assert rule(0.5, 100) == (1, True)

    @pytest.mark.parametrize("C", [1.0, 0.5])
    def test_threshold_must_exceed_one(self, C):
        with pytest.raises(ConfigurationError):
            batch_length(0.1, C, 10)

    def test_negative_variance(self):
        with pytest.raises(UsageError):
            batch_length(-0.1, 1.1, 10)

    def test_exhausted_budget(self):
        with pytest.raises(UsageError):
            batch_length(0.1, 1.1, 0)


class TestRunMini:
    """Test the epoch loop end to end on a small grid."""

    def test_single_step(self, small_env, loop_kernel, ucb_schedule):
        result = run_mini(small_env, loop_kernel, ucb_schedule, LAM, 1.1, 1, seed=0)
        assert result.steps == 1
        assert result.num_epochs == 1
        assert result.epochs[0].clamped
        assert result.final_unique_count == 1

    def test_first_epoch_picks_lowest_index(self, loop_kernel):
        grid = CandidateGrid.from_points(np.linspace(-1.0, 1.0, 7)[:, None])
        env = Environment(grid, Objective(ObjectiveFamily.ELLIPSOID, noise_std=0.0))
        schedule = BetaSchedule.bayesian_ucb(card=grid.size, delta=0.1)
        result = run_mini(env, loop_kernel, schedule, 1.0, 1.1, 10, seed=0)
        first = result.epochs[0]
        assert first.candidate_index == 0
        assert first.batch_length == 1
        assert first.variance_at_selection == 1.0

    def test_trace_invariants(self, small_env, loop_kernel, ucb_schedule):
        T = 150
        result = run_mini(small_env, loop_kernel, ucb_schedule, LAM, 1.2, T, seed=3)

        assert sum(e.batch_length for e in result.epochs) == T
        assert result.chosen.shape == (T,)
        assert np.all(np.diff(result.unique_counts) >= 0)
        assert np.all(result.unique_counts <= result.switch_counts)
        assert result.final_unique_count <= result.num_epochs
        assert result.history.total_steps == T
        assert np.all(np.diff(result.elapsed) >= 0)

        for epoch in result.epochs:
            steps = slice(epoch.start_step - 1, epoch.start_step - 1 + epoch.batch_length)
            assert np.all(result.chosen[steps] == epoch.candidate_index)
            assert np.all(result.epoch_of_step[steps] == epoch.epoch_index)
            if not epoch.clamped and epoch.start_step - 1 + epoch.batch_length < T:
                expected = math.floor((1.2 * 1.2 - 1.0) / (epoch.variance_at_selection / LAM))
                assert epoch.batch_length == expected

    def test_batch_length_from_trace_alone(self, small_env, loop_kernel, ucb_schedule):
        T = 150
        C = 1.2
        result = run_mini(small_env, loop_kernel, ucb_schedule, LAM, C, T, seed=5)
        for epoch in result.epochs:
            assert epoch.regularization == LAM
            assert epoch.scaled_variance == pytest.approx(epoch.variance_at_selection / LAM)
            remaining = T - epoch.start_step + 1
            if epoch.scaled_variance == 0:
                assert epoch.batch_length == remaining
                continue
            raw = math.floor((C * C - 1.0) / epoch.scaled_variance)
            assert epoch.batch_length == min(remaining, max(1, raw))
            assert epoch.clamped == (raw < 1)

    def test_batches_grow(self, small_env, loop_kernel, ucb_schedule):
        result = run_mini(small_env, loop_kernel, ucb_schedule, 1.0, 1.1, 300, seed=1)
        assert result.num_epochs < 300
        assert max(e.batch_length for e in result.epochs) > 1

    def test_deterministic(self, small_env, loop_kernel, ucb_schedule):
        a = run_mini(small_env, loop_kernel, ucb_schedule, LAM, 1.1, 80, seed=11, record_time=False)
        b = run_mini(small_env, loop_kernel, ucb_schedule, LAM, 1.1, 80, seed=11, record_time=False)
        assert np.array_equal(a.chosen, b.chosen)
        assert np.array_equal(a.rewards, b.rewards)
        assert a.epochs == b.epochs
        assert np.all(a.elapsed == 0.0)

    def test_params_recorded(self, small_env, loop_kernel, ucb_schedule):
        result = run_mini(small_env, loop_kernel, ucb_schedule, LAM, 1.1, 5, seed=0)
        assert result.algorithm == "mini-gp-ucb"
        assert result.params["C"] == 1.1
        assert result.params["lambda"] == LAM

    def test_ei_variant(self, small_env, loop_kernel):
        schedule = BetaSchedule.frequentist_ei(delta=0.1)
        result = run_mini(small_env, loop_kernel, schedule, LAM, 1.1, 60, seed=2,
                          acquisition=AcquisitionKind.EI)
        assert result.algorithm == "mini-gp-ei"
        assert sum(e.batch_length for e in result.epochs) == 60

    def test_invalid_threshold(self, small_env, loop_kernel, ucb_schedule):
        with pytest.raises(ConfigurationError):
            run_mini(small_env, loop_kernel, ucb_schedule, LAM, 1.0, 10, seed=0)

    def test_invalid_budget(self, small_env, loop_kernel, ucb_schedule):
        with pytest.raises(ConfigurationError):
            run_mini(small_env, loop_kernel, ucb_schedule, LAM, 1.1, 0, seed=0)


class TestBatchSemantics:
    """Selections depend only on feedback from completed epochs."""

    def test_deferred_feedback_replay(self, small_env, loop_kernel, ucb_schedule):
        kwargs = dict(record_time=False)
        per_step = run_mini(small_env, loop_kernel, ucb_schedule, LAM, 1.1, 120, seed=5,
                            feedback_delivery=FeedbackDelivery.PER_STEP, **kwargs)
        deferred = run_mini(small_env, loop_kernel, ucb_schedule, LAM, 1.1, 120, seed=5,
                            feedback_delivery=FeedbackDelivery.EPOCH_END, **kwargs)
        assert np.array_equal(per_step.chosen, deferred.chosen)
        assert np.array_equal(per_step.rewards, deferred.rewards)
        assert per_step.epochs == deferred.epochs

    def test_clamped_run_equals_sequential(self, small_env, loop_kernel, ucb_schedule):
        C = 1.0000001
        mini = run_mini(small_env, loop_kernel, ucb_schedule, 1.0, C, 60, seed=9, record_time=False)
        seq = run_gp_ucb(small_env, loop_kernel, ucb_schedule, 1.0, 60, seed=9, record_time=False)
        assert all(e.clamped for e in mini.epochs)
        assert np.array_equal(mini.chosen, seq.chosen)
        assert np.array_equal(mini.rewards, seq.rewards)
        assert np.array_equal(mini.unique_counts, seq.unique_counts)
        assert mini.num_epochs == seq.num_epochs == 60

    @pytest.mark.parametrize("lam", [1.0, LAM])
    def test_within_batch_ratio(self, small_env, loop_kernel, ucb_schedule, rng, lam):
        C = 1.1
        result = run_mini(small_env, loop_kernel, ucb_schedule, lam, C, 200, seed=4)
        probes = rng.uniform(-5.0, 5.0, size=(50, 2))
        ratios = within_batch_ratios(result, small_env.grid, loop_kernel, lam, probes)
        assert all(r.max_ratio <= C + 1e-6 for r in ratios)

    def test_unclamped_batches_checked(self, small_env, loop_kernel, ucb_schedule, rng):
        result = run_mini(small_env, loop_kernel, ucb_schedule, 1.0, 1.1, 200, seed=4)
        probes = rng.uniform(-5.0, 5.0, size=(10, 2))
        ratios = within_batch_ratios(result, small_env.grid, loop_kernel, 1.0, probes)
        assert len(ratios) > 0
        assert all(r.batch_length > 1 for r in ratios)

    def test_history_merge_once_per_epoch(self, small_env, loop_kernel, ucb_schedule):
        result = run_mini(small_env, loop_kernel, ucb_schedule, LAM, 1.1, 100, seed=6)
        history = UniqueHistory.empty(2)
        for epoch in result.epochs:
            start = epoch.start_step - 1
            rewards = result.rewards[start:start + epoch.batch_length]
            history = history_add(history, small_env.grid.candidate(epoch.candidate_index), rewards)
        assert np.array_equal(history.counts, result.history.counts)
        assert np.array_equal(history.feedback_sum, result.history.feedback_sum)

        model = posterior_fit(history, loop_kernel, LAM)
        assert model.logdet >= 0

"""Q-learning agent: value updates, action selection, rewards, episode loop."""

import numpy as np
import pytest

from conftest import make_context
from volteq.agent import (LearningParams, QAgent, QTable, decay_epsilon, q_update,
                          reward, run_episode, select_action)
from volteq.errors import ConfigurationError
from volteq.faults import ActionDistribution


def _params(**over) -> LearningParams:
    return LearningParams(**over)


class TestQUpdate:
    def test_single_step_from_zero(self):
        table = QTable()
        out = q_update(table, 0, 1, 1.0, 2, alpha=0.001, gamma=0.95)
        assert out == pytest.approx(0.001, abs=1e-15)

    def test_zero_reward_zero_table_is_fixed_point(self):
        table = QTable()
        q_update(table, 1, 3, 0.0, 1, alpha=0.001, gamma=0.95)
        assert np.all(table.values == 0.0)

    def test_only_visited_entry_changes(self):
        table = QTable()
        table.values[:] = 0.5
        before = table.values.copy()
        q_update(table, 2, 4, -1.0, 0, alpha=0.1, gamma=0.95)
        diff = table.values != before
        assert diff.sum() == 1 and diff[2, 4]
        assert table.values.shape == (3, 5)

    def test_fixed_point_r_over_one_minus_gamma(self):
        # Repeated update of one entry with constant r=1 and s'=s converges
        # to 1/(1-0.95) = 20.
        table = QTable()
        value = 0.0
        for _ in range(1_000_000):
            value = q_update(table, 0, 0, 1.0, 0, alpha=0.001, gamma=0.95)
            if abs(value - 20.0) < 1e-6:
                break
        assert value == pytest.approx(20.0, abs=1e-6)


class TestSelectAction:
    def test_pure_exploration_is_uniform_chi_squared(self):
        rng = np.random.default_rng(23)
        table = QTable()
        n = 100_000
        counts = np.zeros(5)
        for _ in range(n):
            counts[select_action(table, 0, 1.0, rng)] += 1
        expected = n / 5
        chi2 = float(np.sum((counts - expected) ** 2 / expected))
        assert chi2 < 13.277  # chi2(df=4) 99th percentile

    def test_exploitation_takes_argmax(self):
        rng = np.random.default_rng(1)
        table = QTable()
        table.values[0] = [0.0, 0.0, 5.0, 0.0, 0.0]
        assert select_action(table, 0, 1e-12, rng) == 2

    def test_tie_breaks_to_lowest_action(self):
        rng = np.random.default_rng(1)
        table = QTable()
        assert select_action(table, 1, 1e-12, rng) == 0


class TestDecay:
    def test_first_step(self):
        assert decay_epsilon(1.0, 0.99, 0.01) == pytest.approx(0.99)

    def test_floor_activates(self):
        assert decay_epsilon(0.0100001, 0.99, 0.01) == 0.01

    def test_closed_form_matches_iteration(self):
        eps = 1.0
        for k in range(1, 1001):
            eps = decay_epsilon(eps, 0.99, 0.01)
            assert eps == pytest.approx(max(0.99 ** k, 0.01), rel=1e-12)
        assert eps == 0.01


class TestReward:
    def test_target_met(self):
        assert reward(6.2, 5.0, 6.0, 3, 20, -20.0, 20.0) == 20.0

    def test_timeout(self):
        assert reward(4.0, 4.5, 6.0, 20, 20, -20.0, 20.0) == -20.0

    def test_unchanged(self):
        assert reward(5.0, 5.0, 6.0, 3, 20, -20.0, 20.0) == 0.0

    def test_decrease(self):
        assert reward(4.0, 5.0, 6.0, 3, 20, -20.0, 20.0) == -1.0

    def test_increase(self):
        assert reward(5.0, 4.0, 6.0, 3, 20, -20.0, 20.0) == 1.0

    def test_equality_tolerance(self):
        assert reward(5.0 + 5e-7, 5.0, 6.0, 3, 20, -20.0, 20.0) == 0.0
        assert reward(5.0 + 2e-6, 5.0, 6.0, 3, 20, -20.0, 20.0) == 1.0

    def test_target_wins_over_timeout(self):
        assert reward(6.5, 5.0, 6.0, 20, 20, -20.0, 20.0) == 20.0


class TestParamsValidation:
    @pytest.mark.parametrize("bad", [
        {"alpha": 0.0}, {"alpha": 1.0}, {"gamma": 1.0}, {"epsilon": 0.0},
        {"epsilon": 1.5}, {"decay": 0.0}, {"epsilon_min": 0.0},
        {"epsilon_min": 0.5, "epsilon": 0.2}, {"tau": 0}, {"episodes": 0},
        {"r_min": -0.5}, {"r_max": 0.5}, {"decay_scope": "weekly"},
    ])
    def test_rejected(self, bad):
        with pytest.raises(ConfigurationError):
            _params(**bad)


class TestRunEpisode:
    def test_greedy_triple_up_terminates_first_tti(self):
        # From the 4 dB anchor a +1 dB x3 action reaches 7 >= 6 immediately.
        params = _params(epsilon=1e-12, epsilon_min=1e-12)
        agent = QAgent(params)
        agent.table.values[:, 4] = 1.0  # make the triple-up action greedy
        ctx = make_context(seed=5, dist=None)
        result = run_episode(ctx, agent, params, episode=1)
        assert result.target_met
        assert result.ttis == 1
        rec = result.records[0]
        assert rec.action == 4 and rec.command == 1 and rec.repetitions == 3
        assert rec.p_tx_dbm == 16.0
        assert rec.sinr_db == pytest.approx(7.0, abs=1e-9)
        assert rec.reward == params.r_max

    def test_hold_forever_times_out_with_r_min(self):
        params = _params(epsilon=1e-12, epsilon_min=1e-12)
        agent = QAgent(params)
        agent.table.values[:, 0] = 1.0  # greedy action is hold
        ctx = make_context(seed=6, dist=ActionDistribution.no_faults())
        result = run_episode(ctx, agent, params, episode=1)
        assert not result.target_met
        assert result.ttis == params.tau
        assert all(rec.sinr_db == 4.0 for rec in result.records)
        assert result.records[-1].reward == params.r_min
        assert all(rec.reward == 0.0 for rec in result.records[:-1])

    def test_trace_is_bit_identical_under_same_seed(self):
        params = _params()
        runs = []
        for _ in range(2):
            agent = QAgent(params)
            ctx = make_context(seed=9, dist=ActionDistribution.default())
            runs.append(run_episode(ctx, agent, params, episode=1).records)
        assert runs[0] == runs[1]

    def test_reward_codomain_over_noisy_run(self):
        params = _params()
        agent = QAgent(params)
        allowed = {params.r_min, -1.0, 0.0, 1.0, params.r_max}
        for z in range(1, 60):
            ctx = make_context(seed=31, episode=z, dist=ActionDistribution.default())
            result = run_episode(ctx, agent, params, episode=z)
            assert result.ttis <= params.tau
            assert result.target_met == (result.final_sinr_db >= params.target_db)
            for rec in result.records:
                assert rec.reward in allowed

    def test_epsilon_non_increasing_with_floor(self):
        params = _params()
        agent = QAgent(params)
        seen = [agent.epsilon]
        total_ttis = 0
        for z in range(1, 120):
            ctx = make_context(seed=40, episode=z, dist=ActionDistribution.default())
            total_ttis += run_episode(ctx, agent, params, episode=z).ttis
            seen.append(agent.epsilon)
        assert all(b <= a for a, b in zip(seen, seen[1:]))
        assert all(e >= params.epsilon_min for e in seen)
        # one decay per executed TTI, floored
        assert seen[-1] == pytest.approx(max(0.99 ** total_ttis, 0.01), rel=1e-12)

    def test_per_episode_decay_scope(self):
        params = _params(decay_scope="episode")
        agent = QAgent(params)
        ctx = make_context(seed=41, dist=ActionDistribution.no_faults())
        run_episode(ctx, agent, params, episode=1)
        assert agent.epsilon == pytest.approx(0.99)

    def test_fpa_mode_logs_zero_commands(self):
        params = _params()
        ctx = make_context(seed=7, dist=ActionDistribution.no_faults())
        result = run_episode(ctx, None, params, episode=3)
        assert result.ttis == params.tau
        for rec in result.records:
            assert rec.command == 0 and rec.repetitions == 0 and rec.action == 0
            assert rec.p_tx_dbm == 13.0
            assert rec.sinr_db == 4.0
            assert rec.reward == 0.0

    def test_faults_disabled_matches_p0_equals_one(self):
        # Fault sampling draws only from the faults substream, so a p0=1
        # run is bitwise identical to one with sampling disabled.
        params = _params()
        results = []
        for dist in (ActionDistribution.no_faults(), None):
            agent = QAgent(params)
            ctx = make_context(seed=12, dist=dist)
            results.append(run_episode(ctx, agent, params, episode=1).records)
        with_p0 = [rec._replace(fault_action=0) for rec in results[0]]
        assert with_p0 == results[1]

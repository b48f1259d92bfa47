"""Fault process: action legality, VSWR delta, neighbor-down bound, reversal."""

import math

import numpy as np
import pytest

from volteq.errors import ConfigurationError
from volteq.faults import (ActionDistribution, FaultRegister, NetworkAction,
                           VswrDrawConfig, apply_action, legal_actions,
                           neighbor_down_sinr_bound, sample_action, vswr_delta)


class _FixedUniform:
    """Stub rng whose uniform() returns a preset value."""

    def __init__(self, value):
        self.value = value

    def uniform(self, low, high):
        assert low <= self.value <= high
        return self.value


class TestDistribution:
    def test_default_is_table_probabilities(self):
        d = ActionDistribution.default()
        assert d.p[0] == pytest.approx(5 / 11)
        assert all(p == pytest.approx(1 / 11) for p in d.p[1:])

    def test_simplex_enforced(self):
        with pytest.raises(ConfigurationError):
            ActionDistribution((0.5, 0.1, 0.1, 0.1, 0.05, 0.05, 0.0))  # sums to 0.9
        with pytest.raises(ConfigurationError):
            ActionDistribution((1.1, -0.1, 0.0, 0.0, 0.0, 0.0, 0.0))

    def test_wrong_length(self):
        with pytest.raises(ConfigurationError):
            ActionDistribution((1.0,))


class TestSampling:
    def test_clears_never_drawn_from_clean_register(self):
        rng = np.random.default_rng(1)
        dist = ActionDistribution.default()
        reg = FaultRegister()
        for _ in range(20_000):
            nu = sample_action(reg, dist, rng)
            assert nu in (0, 1, 2, 3)

    def test_clean_register_normal_probability_is_5_of_8(self):
        rng = np.random.default_rng(2)
        dist = ActionDistribution.default()
        reg = FaultRegister()
        n = 200_000
        hits = sum(sample_action(reg, dist, rng) == 0 for _ in range(n))
        assert hits / n == pytest.approx(5 / 8, abs=0.005)

    def test_feeder_set_legal_set_and_frequencies(self):
        # With the feeder bit set the legal set is {0, 2, 3, 4}, each fault
        # action at (1/11)/(8/11) = 1/8 and normal at 5/8.
        rng = np.random.default_rng(3)
        dist = ActionDistribution.default()
        reg = FaultRegister(feeder_fault=True, feeder_loss_db=3.0)
        assert legal_actions(reg) == [NetworkAction.NORMAL, NetworkAction.NEIGHBOR_DOWN,
                                      NetworkAction.VSWR_OUT, NetworkAction.FEEDER_CLEARED]
        n = 1_000_000
        counts = {0: 0, 2: 0, 3: 0, 4: 0}
        for _ in range(n):
            counts[int(sample_action(reg, dist, rng))] += 1
        assert counts[0] / n == pytest.approx(5 / 8, abs=0.005)
        for a in (2, 3, 4):
            assert counts[a] / n == pytest.approx(1 / 8, abs=0.005)

    def test_register_legality_over_sampled_trajectory(self):
        rng = np.random.default_rng(4)
        dist = ActionDistribution.default()
        reg = FaultRegister()
        vswr = VswrDrawConfig()
        for _ in range(100_000):
            nu = sample_action(reg, dist, rng)
            if nu == NetworkAction.FEEDER_CLEARED:
                assert reg.feeder_fault
            if nu == NetworkAction.NEIGHBOR_UP:
                assert reg.neighbor_down
            if nu == NetworkAction.VSWR_BACK:
                assert reg.vswr_out
            if nu == NetworkAction.FEEDER_FAULT:
                assert not reg.feeder_fault
            if nu == NetworkAction.NEIGHBOR_DOWN:
                assert not reg.neighbor_down
            if nu == NetworkAction.VSWR_OUT:
                assert not reg.vswr_out
            apply_action(nu, reg, vswr, rng)


class TestVswrDelta:
    def test_no_change_is_zero(self):
        assert vswr_delta(1.5, 1.5) == pytest.approx(0.0, abs=1e-12)

    def test_degradation_example(self):
        assert vswr_delta(1.5, 3.0) == pytest.approx(7.958800173440752, abs=1e-12)
        assert vswr_delta(1.5, 3.0) == pytest.approx(20.0 * math.log10(2.5), abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            vswr_delta(1.0, 2.0)
        with pytest.raises(ValueError):
            vswr_delta(1.5, 0.9)


class TestNeighborDownBound:
    def test_two_cell_cluster_is_interference_free(self):
        assert neighbor_down_sinr_bound(3.0, 1.5, 2, 100.0) == pytest.approx(2.0)

    def test_five_cell_example(self):
        assert neighbor_down_sinr_bound(1.0, 1.0, 5, 2.0) == pytest.approx(1 / 7)

    def test_monotone_in_cluster_size_and_power(self):
        values = [neighbor_down_sinr_bound(1.0, 1.0, c, 2.0) for c in range(2, 8)]
        assert all(b < a for a, b in zip(values, values[1:]))
        values = [neighbor_down_sinr_bound(1.0, 1.0, 5, p) for p in (1.0, 2.0, 4.0, 8.0)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_cluster_too_small(self):
        with pytest.raises(ValueError):
            neighbor_down_sinr_bound(1.0, 1.0, 1, 2.0)

    def test_dominated_by_exact_sinr_on_random_instances(self):
        # The bound must sit below the exact SINR recomputed with one cell
        # removed and any surge factors (1+eps_j) k_j <= 1, because each
        # remaining interferer is received below its raw max transmit power.
        rng = np.random.default_rng(8)
        for _ in range(1000):
            cluster = int(rng.integers(2, 7))
            p_max_mw = float(rng.uniform(0.5, 3000.0))
            noise = float(rng.uniform(1e-9, 1.0))
            p_ue = float(rng.uniform(1e-6, 1.0))
            # surviving interferers: received power cannot exceed p_max
            m = cluster - 2
            received = rng.uniform(0.0, p_max_mw, m)
            weights = rng.random(m)  # (1+eps_j) k_j capped at 1
            exact = p_ue / (noise + float(np.sum(weights * received)))
            bound = neighbor_down_sinr_bound(p_ue, noise, cluster, p_max_mw)
            assert bound <= exact * (1 + 1e-12)


class TestApplyAction:
    def test_feeder_set_then_clear_restores_bit_exactly(self):
        reg = FaultRegister()
        vswr = VswrDrawConfig()
        apply_action(NetworkAction.FEEDER_FAULT, reg, vswr)
        assert reg.feeder_fault and reg.extra_misc_loss_db == 3.0
        apply_action(NetworkAction.FEEDER_CLEARED, reg, vswr)
        assert reg == FaultRegister()

    def test_vswr_draw_and_loss(self):
        reg = FaultRegister()
        vswr = VswrDrawConfig()
        apply_action(NetworkAction.VSWR_OUT, reg, vswr, _FixedUniform(3.0))
        assert reg.vswr_out and reg.vswr_current == 3.0
        assert reg.extra_misc_loss_db == pytest.approx(7.958800173440752, abs=1e-12)
        apply_action(NetworkAction.VSWR_BACK, reg, vswr)
        assert reg == FaultRegister()

    def test_neighbor_down_sets_mode_bit(self):
        reg = FaultRegister()
        apply_action(NetworkAction.NEIGHBOR_DOWN, reg, VswrDrawConfig())
        assert reg.neighbor_down and reg.extra_misc_loss_db == 0.0

    def test_reversal_identity_for_all_pairs(self):
        vswr = VswrDrawConfig()
        pairs = [(NetworkAction.FEEDER_FAULT, NetworkAction.FEEDER_CLEARED),
                 (NetworkAction.NEIGHBOR_DOWN, NetworkAction.NEIGHBOR_UP),
                 (NetworkAction.VSWR_OUT, NetworkAction.VSWR_BACK)]
        for set_a, clear_a in pairs:
            reg = FaultRegister()
            apply_action(set_a, reg, vswr, _FixedUniform(2.5))
            apply_action(clear_a, reg, vswr)
            assert reg == FaultRegister()

    def test_illegal_actions_rejected(self):
        reg = FaultRegister()
        with pytest.raises(ValueError):
            apply_action(NetworkAction.FEEDER_CLEARED, reg, VswrDrawConfig())
        apply_action(NetworkAction.FEEDER_FAULT, reg, VswrDrawConfig())
        with pytest.raises(ValueError):
            apply_action(NetworkAction.FEEDER_FAULT, reg, VswrDrawConfig())

    def test_vswr_bit_tracks_ratio(self):
        reg = FaultRegister()
        assert (reg.vswr_current != reg.vswr_nominal) == reg.vswr_out
        apply_action(NetworkAction.VSWR_OUT, reg, VswrDrawConfig(), _FixedUniform(2.2))
        assert (reg.vswr_current != reg.vswr_nominal) == reg.vswr_out

    def test_vswr_config_validation(self):
        with pytest.raises(ConfigurationError):
            VswrDrawConfig(nominal=1.0)
        with pytest.raises(ConfigurationError):
            VswrDrawConfig(degraded_low=3.0, degraded_high=2.0)

import logging
import math

import pytest

from lgfnoma.core.params import SystemParams, build_layer_plan, to_dbm
from lgfnoma.core.power import (
    avg_power_random_noma,
    avg_power_ub_hybrid,
    hybrid_power_fn,
    max_levels,
    random_noma_power_fn,
    select_levels,
)
from lgfnoma.utils.error_handling import InvalidArgumentError, UnsupportedError

GAMMA = 3.981071705534973


class TestHybridBound:
    def test_single_level(self, default_params):
        assert avg_power_ub_hybrid(default_params, 1) == pytest.approx(48 / 47 * GAMMA, rel=1e-12)

    def test_five_levels(self, default_params):
        value = avg_power_ub_hybrid(default_params, 5)
        assert value == pytest.approx(52.2, rel=2e-3)
        assert to_dbm(value) == pytest.approx(17.2, abs=0.2)

    def test_six_levels_exceed_budget(self, default_params):
        assert to_dbm(avg_power_ub_hybrid(default_params, 6)) > 18.0

    def test_factor_switches_to_two_ln_two_at_two_subchannels(self, default_params):
        two = default_params.with_subchannels(2)
        assert avg_power_ub_hybrid(two, 1) == pytest.approx(2 * math.log(2) * GAMMA, rel=1e-12)

    def test_rejects_single_subchannel(self, default_params):
        with pytest.raises(UnsupportedError):
            avg_power_ub_hybrid(default_params, 3, M=1)

    def test_increasing_in_levels(self, default_params):
        values = [avg_power_ub_hybrid(default_params, L) for L in range(1, 11)]
        assert all(a < b for a, b in zip(values, values[1:]))


class TestRandomNomaPower:
    def test_unit_expectation(self, default_params):
        assert avg_power_random_noma(default_params, 1, 1.0) == pytest.approx(GAMMA)

    def test_default_expectation(self, default_params):
        assert avg_power_random_noma(default_params, 3) == pytest.approx(14.09, rel=1e-3)

    def test_two_level_identity(self, default_params):
        c = 0.7
        expected = c * GAMMA * (GAMMA + 2) / 2
        assert avg_power_random_noma(default_params, 2, c) == pytest.approx(expected, rel=1e-12)

    def test_telescoped_closed_form(self, default_params):
        for L in range(1, 8):
            closed = default_params.default_inv_gain * ((GAMMA + 1) ** L - 1) / L
            assert avg_power_random_noma(default_params, L) == pytest.approx(closed, rel=1e-12)

    def test_matches_plan_mean(self, default_params):
        plan = build_layer_plan(default_params, 4)
        expected = sum(plan.power_levels) / 4 * 0.5
        assert avg_power_random_noma(default_params, 4, 0.5) == pytest.approx(expected)

    def test_rejects_non_positive_expectation(self, default_params):
        with pytest.raises(InvalidArgumentError):
            avg_power_random_noma(default_params, 2, 0.0)


class TestLevelSelection:
    """Maximum acceptable number of power levels."""

    def test_hybrid_default_setup(self, default_params):
        assert max_levels(default_params, hybrid_power_fn(default_params)) == 5

    def test_random_noma_default_model(self):
        params = SystemParams(receiver_max_levels=10)
        selection = select_levels(params, random_noma_power_fn(params))
        # 52.98 (17.24 dBm) at L=4, 211 at L=5
        assert selection.l_max == 4
        assert selection.raw == 4
        assert not selection.degenerate

    def test_unbounded_budget_capped_by_receiver(self):
        params = SystemParams(max_avg_power_dbm=1000.0)
        selection = select_levels(params, hybrid_power_fn(params))
        assert selection.l_max == 5
        assert selection.raw >= 5

    def test_uncapped_raw_value(self):
        params = SystemParams(receiver_max_levels=2)
        selection = select_levels(params, hybrid_power_fn(params))
        assert selection.l_max == 2
        assert selection.raw == 5

    def test_degenerate_budget(self, caplog):
        params = SystemParams(max_avg_power_dbm=0.0)
        with caplog.at_level(logging.WARNING, logger="lgfnoma.core.power"):
            selection = select_levels(params, hybrid_power_fn(params))
        assert selection.l_max == 1
        assert selection.raw == 0
        assert selection.degenerate
        assert "P_max" in caplog.text

    def test_non_monotone_function_rejected(self, default_params):
        with pytest.raises(InvalidArgumentError):
            select_levels(default_params, lambda L: 10.0 if L == 2 else float(L))

    def test_never_exceeds_any_violating_level(self, default_params):
        fn = hybrid_power_fn(default_params)
        L = max_levels(default_params, fn)
        assert fn(L) < default_params.max_avg_power

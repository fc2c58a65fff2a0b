import math

import numpy as np
import pytest
from pydantic import ValidationError

from lgfnoma.core.params import (
    LayerPlan,
    SystemParams,
    build_layer_plan,
    from_db,
    layer_of,
    layers_of,
    to_dbm,
    tx_power,
    tx_powers,
)
from lgfnoma.utils.error_handling import (
    InvalidArgumentError,
    InvalidChannelError,
    OutOfCellError,
)

GAMMA = 3.981071705534973


class TestUnits:
    def test_from_db(self):
        assert from_db(0) == 1.0
        assert from_db(6) == pytest.approx(GAMMA, rel=1e-12)
        assert from_db(18) == pytest.approx(63.0957344480193, rel=1e-12)

    def test_to_dbm(self):
        assert to_dbm(1.0) == 0.0
        assert to_dbm(from_db(18)) == pytest.approx(18.0, abs=1e-12)

    def test_to_dbm_rejects_non_positive(self):
        with pytest.raises(InvalidArgumentError):
            to_dbm(0.0)
        with pytest.raises(InvalidArgumentError):
            to_dbm(-1.0)


class TestSystemParams:
    """Scenario parameters and their derived values."""

    def test_defaults(self, default_params):
        assert default_params.num_subchannels == 48
        assert default_params.target_sinr == pytest.approx(GAMMA)
        assert default_params.max_avg_power == pytest.approx(63.0957, rel=1e-5)
        assert default_params.receiver_max_levels == 5
        assert default_params.num_devices == 300

    def test_default_inverse_gain(self, default_params):
        assert default_params.default_inv_gain == pytest.approx(2.0 / 5.8)

    def test_explicit_inverse_gain(self):
        assert SystemParams(inv_gain_expectation=0.5).default_inv_gain == 0.5

    def test_non_integer_subchannel_count_rejected(self):
        with pytest.raises(ValidationError):
            SystemParams(subchannel_bandwidth_khz=7.0)

    def test_single_subchannel_rejected(self):
        with pytest.raises(ValidationError):
            SystemParams(subchannel_bandwidth_khz=180.0)

    def test_slot_longer_than_requirement_rejected(self):
        with pytest.raises(ValidationError):
            SystemParams(slot_period_ms=2.0, delay_requirement_ms=1.0)

    def test_pathloss_exponent_must_exceed_two(self):
        with pytest.raises(ValidationError):
            SystemParams(pathloss_exponent=2.0)

    def test_unknown_field_rejected(self):
        with pytest.raises(ValidationError):
            SystemParams(bandwidth=1.0)

    def test_frozen(self, default_params):
        with pytest.raises(ValidationError):
            default_params.num_devices = 10

    def test_with_subchannels(self, default_params):
        p = default_params.with_subchannels(96)
        assert p.num_subchannels == 96
        assert p.subchannel_bandwidth_khz == pytest.approx(1.875)
        assert p.total_bandwidth_khz == default_params.total_bandwidth_khz
        assert default_params.num_subchannels == 48

    def test_with_subchannels_rejects_one(self, default_params):
        with pytest.raises(InvalidArgumentError):
            default_params.with_subchannels(1)

    def test_replace(self, default_params):
        p = default_params.replace(num_devices=10)
        assert p.num_devices == 10
        assert p.num_subchannels == 48


class TestLayerPlan:
    def test_levels_and_rings(self, default_params):
        plan = build_layer_plan(default_params, 3)
        assert plan.power_levels[-1] == pytest.approx(GAMMA)
        assert plan.power_levels[1] == pytest.approx(GAMMA * (GAMMA + 1))
        assert plan.power_levels[0] == pytest.approx(GAMMA * (GAMMA + 1) ** 2)
        assert plan.ring_boundaries == pytest.approx((0.0, math.sqrt(1 / 3), math.sqrt(2 / 3), 1.0))
        assert plan.ring_boundaries[-1] == 1.0

    def test_single_level(self, default_params):
        plan = build_layer_plan(default_params, 1)
        assert plan.power_levels == pytest.approx((GAMMA,))
        assert plan.ring_boundaries == (0.0, 1.0)

    def test_sinr_guarantee(self, default_params):
        """Each level decoded with all weaker levels occupied sees SINR exactly Γ."""
        plan = build_layer_plan(default_params, 5)
        v = plan.power_levels
        for l in range(5):
            interference = 1.0 + sum(v[l + 1 :])
            assert v[l] / interference == pytest.approx(GAMMA, rel=1e-12)

    def test_invalid_level_count(self, default_params):
        with pytest.raises(InvalidArgumentError):
            build_layer_plan(default_params, 0)

    def test_power_accessor(self, default_params):
        plan = build_layer_plan(default_params, 2)
        assert plan.power(2) == pytest.approx(GAMMA)
        with pytest.raises(InvalidArgumentError):
            plan.power(3)

    def test_shape_validation(self):
        with pytest.raises(ValidationError):
            LayerPlan(num_levels=2, power_levels=(1.0,), ring_boundaries=(0.0, 0.5, 1.0))
        with pytest.raises(ValidationError):
            LayerPlan(num_levels=2, power_levels=(1.0, 2.0), ring_boundaries=(0.0, 0.5, 1.0))


class TestLayerOf:
    def test_boundaries(self, default_params):
        plan = build_layer_plan(default_params, 5)
        assert layer_of(0.0, plan) == 1
        assert layer_of(0.3, plan) == 1
        assert layer_of(math.sqrt(0.2), plan) == 1
        assert layer_of(0.5, plan) == 2
        assert layer_of(1.0, plan) == 5

    def test_outside_cell(self, default_params):
        plan = build_layer_plan(default_params, 5)
        with pytest.raises(OutOfCellError):
            layer_of(1.0001, plan)
        with pytest.raises(OutOfCellError):
            layer_of(-0.1, plan)

    def test_vectorised_matches_scalar(self, default_params):
        plan = build_layer_plan(default_params, 4)
        d = np.linspace(0.0, 1.0, 101)
        assert list(layers_of(d, plan)) == [layer_of(x, plan) for x in d]

    def test_vectorised_outside_cell(self, default_params):
        plan = build_layer_plan(default_params, 4)
        with pytest.raises(OutOfCellError):
            layers_of(np.array([0.5, 1.5]), plan)


class TestTxPower:
    def test_picks_strongest_subchannel(self):
        assert tx_power(4.0, [0.5, 2.0, 1.0]) == (2.0, 2)

    def test_ties_take_lowest_index(self):
        assert tx_power(1.0, [1.0, 1.0]) == (1.0, 1)

    def test_non_positive_gain(self):
        with pytest.raises(InvalidChannelError):
            tx_power(1.0, [0.0, 1.0])

    def test_empty_gains(self):
        with pytest.raises(InvalidArgumentError):
            tx_power(1.0, [])

    def test_row_wise_matches_single_device(self):
        gains = np.array([[0.5, 2.0, 1.0], [1.0, 1.0, 0.25], [3.0, 0.1, 4.0]])
        levels = np.array([4.0, 1.0, 2.0])
        powers, subchannels = tx_powers(levels, gains)
        for v, row, p, k in zip(levels, gains, powers, subchannels):
            assert (p, k) == tx_power(v, row)

    def test_row_wise_infinite_gain(self):
        powers, _ = tx_powers(np.array([2.0]), np.array([[np.inf, 1.0]]))
        assert powers[0] == 0.0

    def test_row_wise_rejects_bad_input(self):
        with pytest.raises(InvalidChannelError):
            tx_powers(np.array([1.0]), np.array([[1.0, -1.0]]))
        with pytest.raises(InvalidArgumentError):
            tx_powers(np.array([1.0, 2.0]), np.array([[1.0, 1.0]]))

from fractions import Fraction

import pytest

from lgfnoma.config.settings import Settings
from lgfnoma.core.analytic import connection_prob
from lgfnoma.core.enumeration import (
    enumeration_size,
    exhaustive_connection_fractions,
    exhaustive_connection_prob,
)
from lgfnoma.utils.error_handling import (
    BudgetExceededError,
    InvalidArgumentError,
    TooLargeInstanceError,
)


class TestExhaustiveEnumeration:
    """Exact per-layer probabilities by enumerating every subchannel assignment."""

    def test_two_subchannels_two_layers(self):
        assert exhaustive_connection_fractions(2, 2, 2) == [Fraction(1, 2), Fraction(3, 8)]

    def test_three_subchannels_two_layers(self):
        assert exhaustive_connection_fractions(3, 2, 2) == [Fraction(2, 3), Fraction(16, 27)]

    def test_single_contender_always_decoded(self):
        assert exhaustive_connection_fractions(4, 1, 3) == [Fraction(1)] * 3

    def test_single_subchannel(self):
        # one device per layer on one subchannel decodes every layer
        assert exhaustive_connection_fractions(1, 1, 2) == [Fraction(1), Fraction(1)]
        assert exhaustive_connection_fractions(1, 2, 2) == [Fraction(0), Fraction(0)]

    @pytest.mark.parametrize("M", [2, 3, 4])
    @pytest.mark.parametrize("C", [1, 2, 3, 4])
    @pytest.mark.parametrize("L", [1, 2, 3])
    def test_agrees_with_closed_form(self, M, C, L):
        if enumeration_size(M, C, L) > Settings.LGF_MAX_ENUMERATION:
            pytest.skip("instance above the enumeration budget")
        exact = exhaustive_connection_prob(M, C, L)
        for l, value in enumerate(exact, start=1):
            assert value == pytest.approx(connection_prob(M, C, l), abs=1e-12)

    def test_enumeration_size(self):
        assert enumeration_size(3, 2, 2) == 81
        assert enumeration_size(4, 4, 3) == 4**12

    def test_budget(self):
        with pytest.raises(TooLargeInstanceError):
            exhaustive_connection_fractions(4, 4, 3)
        with pytest.raises(BudgetExceededError):
            exhaustive_connection_fractions(3, 2, 2, budget=80)

    def test_budget_from_environment(self, monkeypatch):
        monkeypatch.setenv("LGF_MAX_ENUMERATION", "10")
        Settings.refresh_from_env()
        with pytest.raises(TooLargeInstanceError):
            exhaustive_connection_fractions(2, 2, 2)

    def test_invalid_arguments(self):
        with pytest.raises(InvalidArgumentError):
            exhaustive_connection_fractions(0, 1, 1)
        with pytest.raises(InvalidArgumentError):
            exhaustive_connection_fractions(2, 0, 1)
        with pytest.raises(InvalidArgumentError):
            exhaustive_connection_fractions(2, 1, 0)

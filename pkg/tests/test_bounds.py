import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entroverify import (
    BoundSpec,
    MarwahParams,
    ValidationError,
    afw_bound,
    bound_value,
    fannes_audenaert,
    marwah_up_bound,
    renyi_down_bound,
    tsallis_down_bound,
)

from oracles import afw_oracle, marwah_bound_oracle, renyi_bound_oracle, tsallis_bound_oracle

# Frozen 50-digit oracle evaluations.
AFW_01_4 = 0.88344668561366468
RENYI_05_2_025 = 2.3219280948873622   # = log2(1.25) + 2
TSALLIS_05_4_025 = 2.708203932499369  # = 2 ((1.5) sqrt(1.25) - 1) * 2
MARWAH_05_2_025 = 1.979830006179176


class TestAfw:
    def test_zero_at_zero(self):
        assert afw_bound(0.0, 7) == 0.0

    def test_eps_one(self):
        assert abs(afw_bound(1.0, 2) - 4.0) < 1e-14

    def test_matches_oracle(self):
        assert abs(afw_bound(0.1, 4) - AFW_01_4) < 1e-12
        assert abs(afw_oracle("0.1", 4) - AFW_01_4) < 1e-15

    def test_range_check(self):
        with pytest.raises(ValidationError, match="eps"):
            afw_bound(1.2, 2)
        with pytest.raises(ValidationError, match="eps"):
            afw_bound(-0.1, 2)


class TestFannesAudenaert:
    def test_zero_at_zero(self):
        assert fannes_audenaert(0.0, 5) == 0.0

    def test_binary_point(self):
        assert abs(fannes_audenaert(0.5, 2) - 1.0) < 1e-14

    def test_t_one(self):
        assert abs(fannes_audenaert(1.0, 3) - 1.0) < 1e-14

    def test_dimension_check(self):
        with pytest.raises(ValidationError, match="dimension"):
            fannes_audenaert(0.5, 1)


class TestRenyiDownBound:
    def test_zero_at_zero(self):
        assert renyi_down_bound(0.5, 3, 0.0) == 0.0

    def test_dimension_independent_above_one(self):
        values = {renyi_down_bound(2.0, d, 1.0) for d in (2, 8, 64)}
        assert len(values) == 1
        assert abs(values.pop() - 2.0) < 1e-14

    def test_matches_oracle(self):
        assert abs(renyi_down_bound(0.5, 2, 0.25) - RENYI_05_2_025) < 1e-12
        assert abs(renyi_bound_oracle("0.5", 2, "0.25") - RENYI_05_2_025) < 1e-15
        # closed form restated: log2(1.25) + 2 (eps^0.5 = 0.5, d^1 = 2)
        assert abs(RENYI_05_2_025 - (np.log2(1.25) + 2.0)) < 1e-14

    def test_range_checks(self):
        for alpha in (0.4, 1.0):
            with pytest.raises(ValidationError, match="alpha"):
                renyi_down_bound(alpha, 2, 0.5)


class TestTsallisDownBound:
    @pytest.mark.parametrize("alpha", [0.7, 1.5])
    def test_zero_at_zero(self, alpha):
        assert abs(tsallis_down_bound(alpha, 3, 0.0)) < 1e-14

    def test_matches_oracle(self):
        assert abs(tsallis_down_bound(0.5, 4, 0.25) - TSALLIS_05_4_025) < 1e-12
        assert abs(tsallis_bound_oracle("0.5", 4, "0.25") - TSALLIS_05_4_025) < 1e-15
        assert abs(TSALLIS_05_4_025 - 2 * (1.5 * np.sqrt(1.25) - 1) * 2) < 1e-14

    def test_range_checks(self):
        for alpha in (0.4, 1.0, 2.0, 2.5):
            with pytest.raises(ValidationError, match="alpha"):
                tsallis_down_bound(alpha, 2, 0.5)


class TestMarwahUpBound:
    def test_zero_at_zero_below_one(self):
        assert abs(marwah_up_bound(0.6, 5, 0.0)) < 1e-14

    def test_zero_at_zero_above_one(self):
        assert abs(marwah_up_bound(2.0, 5, 0.0)) < 1e-14

    def test_dual_order(self):
        params = MarwahParams(2.0)
        assert abs(1 / params.alpha + 1 / params.beta - 2.0) < 1e-15
        assert abs(params.beta - 2.0 / 3.0) < 1e-15

    def test_matches_oracle(self):
        assert abs(marwah_up_bound(0.5, 2, 0.25) - MARWAH_05_2_025) < 1e-12
        assert abs(marwah_bound_oracle("0.5", 2, "0.25") - MARWAH_05_2_025) < 1e-15

    def test_range_checks(self):
        with pytest.raises(ValidationError, match="alpha"):
            marwah_up_bound(0.3, 2, 0.5)


class TestFamilyProperties:
    FAMILY_CASES = [
        ("afw", None, 4),
        ("renyi_down", 0.5, 2),
        ("renyi_down", 0.9, 3),
        ("renyi_down", 1.5, 4),
        ("renyi_down", 3.0, 2),
        ("tsallis_down", 0.5, 2),
        ("tsallis_down", 0.75, 3),
        ("tsallis_down", 1.5, 4),
        ("tsallis_down", 1.9, 2),
        ("marwah_up", 0.6, 2),
        ("marwah_up", 2.0, 3),
    ]

    @pytest.mark.parametrize("family,alpha,d", FAMILY_CASES)
    def test_monotone_and_zero_at_zero(self, family, alpha, d):
        spec_zero = BoundSpec(family, alpha or 0.0, d, 0.0)
        assert abs(bound_value(spec_zero)) < 1e-12
        grid = np.linspace(0.0, 1.0, 101)
        values = [bound_value(BoundSpec(family, alpha or 0.0, d, e)) for e in grid]
        diffs = np.diff(values)
        assert np.all(diffs >= -1e-12)

    @pytest.mark.parametrize("alpha", [0.5, 0.9, 1.5, 4.0, 16.0])
    @pytest.mark.parametrize("d", [2, 16, 64])
    def test_finite_for_large_parameters(self, alpha, d):
        for family in ("renyi_down", "marwah_up"):
            assert np.isfinite(bound_value(BoundSpec(family, alpha, d, 0.9)))
        if alpha < 2.0:
            assert np.isfinite(bound_value(BoundSpec("tsallis_down", alpha, d, 0.9)))

    def test_fannes_audenaert_is_not_monotone(self):
        # the binary-entropy term decreases after T = 1/2, so this family is
        # genuinely non-monotone near T = 1; it still vanishes at 0
        values = [fannes_audenaert(t, 4) for t in np.linspace(0.0, 1.0, 101)]
        assert values[0] == 0.0
        assert min(np.diff(values)) < 0

    def test_unknown_family(self):
        with pytest.raises(ValidationError, match="family"):
            BoundSpec("chebyshev", 0.5, 2, 0.5)

    @given(st.floats(0.0, 1.0), st.integers(1, 64))
    @settings(max_examples=80, deadline=None)
    def test_afw_nonnegative(self, eps, d):
        assert afw_bound(eps, d) >= 0.0

"""Tests for the second-moment statistics module."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regimevar import (
    ConstantSeriesError,
    TimeSeries,
    acf,
    cumulative_squares,
    empirical_quantile,
    expected_cumulative,
    expected_window,
    sample_std,
    window_second_moment,
)

finite_series = st.lists(
    st.floats(min_value=-1e3, max_value=1e3, allow_nan=False), min_size=1, max_size=60
).map(lambda v: np.asarray(v, dtype=np.float64))


class TestTimeSeries:
    def test_validates_finite(self):
        with pytest.raises(ValueError, match="non-finite"):
            TimeSeries(np.array([1.0, np.nan]))
        with pytest.raises(ValueError, match="non-finite"):
            TimeSeries(np.array([np.inf]))

    def test_rejects_empty_and_2d(self):
        with pytest.raises(ValueError):
            TimeSeries(np.array([]))
        with pytest.raises(ValueError):
            TimeSeries(np.zeros((3, 3)))

    def test_length(self):
        assert len(TimeSeries(np.arange(7.0))) == 7


class TestCumulativeSquares:
    def test_constant_series(self):
        np.testing.assert_array_equal(cumulative_squares([1, 1, 1]).c, [1, 2, 3])

    def test_mixed_signs(self):
        np.testing.assert_array_equal(cumulative_squares([2, -2, 0, 3]).c, [4, 8, 8, 17])

    def test_final_entry_matches_naive_loop(self):
        x = np.random.default_rng(42).normal(0, 1, 100)
        total = 0.0
        for v in x:  # independent naive summation
            total += float(v) * float(v)
        got = cumulative_squares(x).c[-1]
        assert abs(got - total) <= 1e-12 * total

    def test_accepts_timeseries(self):
        ts = TimeSeries(np.array([1.0, 2.0]))
        np.testing.assert_array_equal(cumulative_squares(ts).c, [1.0, 5.0])

    @given(finite_series)
    @settings(max_examples=50, deadline=None)
    def test_non_decreasing(self, x):
        c = cumulative_squares(x).c
        assert np.all(np.diff(c) >= 0)

    @given(finite_series, st.floats(min_value=0.1, max_value=50))
    @settings(max_examples=50, deadline=None)
    def test_scale_equivariance(self, x, scale):
        base = cumulative_squares(x).c
        scaled = cumulative_squares(scale * x).c
        np.testing.assert_allclose(scaled, scale**2 * base, rtol=1e-12, atol=1e-300)


class TestExpectedCumulative:
    def test_direct_substitution(self):
        curve = expected_cumulative(4, 16, 800, 1800)
        assert curve[799] == pytest.approx(3200)
        assert curve[1799] == pytest.approx(19200)

    def test_equal_moments_is_line_through_origin(self):
        curve = expected_cumulative(2.5, 2.5, 7, 20)
        np.testing.assert_allclose(curve, 2.5 * np.arange(1, 21))

    def test_small_case(self):
        np.testing.assert_allclose(expected_cumulative(1, 2, 1, 3), [1, 3, 5])

    def test_continuous_at_break(self):
        curve = expected_cumulative(3, 11, 10, 30)
        left_at_l = 10 * 3
        right_limit = 11 * 11 + 10 * (3 - 11)  # j = l+1 minus one slope step
        assert curve[9] == pytest.approx(left_at_l)
        assert curve[10] == pytest.approx(right_limit)

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            expected_cumulative(-1, 1, 1, 5)
        with pytest.raises(ValueError):
            expected_cumulative(1, 1, 0, 5)
        with pytest.raises(ValueError):
            expected_cumulative(1, 1, 6, 5)


class TestWindowSecondMoment:
    def test_constant(self):
        np.testing.assert_array_equal(window_second_moment([1, 1, 1, 1], 2).r, [2, 2, 2])

    def test_whole_series(self):
        np.testing.assert_array_equal(window_second_moment([1, 2, 3], 3).r, [14])

    def test_matches_naive_window_sums(self):
        from regimevar import sample_stable

        rng = np.random.default_rng(7)
        x = sample_stable(1.8, 0, 1, 0, 200, rng)
        r = window_second_moment(x, 50).r
        for j in range(0, 151):
            naive = sum(float(v) ** 2 for v in x[j : j + 50])
            assert abs(r[j] - naive) <= 1e-9 * max(naive, 1.0)

    def test_rejects_bad_width(self):
        with pytest.raises(ValueError):
            window_second_moment([1, 2, 3], 4)
        with pytest.raises(ValueError):
            window_second_moment([1, 2, 3], 0)

    @given(finite_series, st.integers(min_value=1, max_value=60))
    @settings(max_examples=50, deadline=None)
    def test_cumulative_identity(self, x, k):
        if k > x.size:
            k = x.size
        r = window_second_moment(x, k).r
        c = np.concatenate(([0.0], cumulative_squares(x).c))
        np.testing.assert_array_equal(r, c[k:] - c[: x.size - k + 1])


class TestExpectedWindow:
    def test_equal_moments_constant(self):
        out = expected_window(3, 3, 10, 4, 20)
        np.testing.assert_allclose(out, np.full(17, 12.0))

    def test_three_branches(self):
        out = expected_window(1, 4, 5, 2, 8)
        np.testing.assert_allclose(out[:4], 2.0)
        assert out[4] == pytest.approx(5.0)
        np.testing.assert_allclose(out[5:], 8.0)

    def test_branch_continuity(self):
        # adjacent branch values differ by at most one linear step
        s1, s2, l, k, n = 2.0, 7.0, 40, 12, 100
        out = expected_window(s1, s2, l, k, n)
        step = abs(s2 - s1)
        assert np.all(np.abs(np.diff(out)) <= step + 1e-12)

    def test_rejects_k_not_less_than_l(self):
        with pytest.raises(ValueError):
            expected_window(1, 2, 5, 5, 10)


class TestEmpiricalQuantile:
    def test_median_of_permutation(self):
        sample = np.random.default_rng(3).permutation(np.arange(1, 101))
        assert empirical_quantile(sample, 0.5) == 50

    def test_exact_rational_order(self):
        sample = np.random.default_rng(4).permutation(np.arange(1, 1001))
        assert empirical_quantile(sample, 0.025) == 25

    def test_order_one_is_maximum(self):
        sample = np.array([3.0, 9.0, 1.0])
        assert empirical_quantile(sample, 1.0) == 9.0

    def test_rejects_bad_order_and_empty(self):
        with pytest.raises(ValueError):
            empirical_quantile([1.0], 0.0)
        with pytest.raises(ValueError):
            empirical_quantile([1.0], 1.5)
        with pytest.raises(ValueError):
            empirical_quantile([], 0.5)

    @given(
        st.lists(st.integers(min_value=-50, max_value=50), min_size=1, max_size=80),
        st.floats(min_value=1e-6, max_value=1.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_order_statistic_property(self, values, a):
        sample = np.asarray(values, dtype=np.float64)
        q = empirical_quantile(sample, a)
        m = sample.size
        rank = int(np.ceil(a * m - 1e-9))
        rank = max(rank, 1)
        assert np.count_nonzero(sample <= q) >= rank
        assert np.count_nonzero(sample < q) <= rank - 1


class TestSampleStd:
    def test_constant_is_zero(self):
        assert sample_std([5.0, 5.0, 5.0]) == 0.0

    def test_two_points(self):
        assert sample_std([0.0, 2.0]) == pytest.approx(np.sqrt(2.0))

    def test_matches_two_pass_oracle(self):
        x = np.random.default_rng(11).normal(3, 2, 500)
        mean = sum(float(v) for v in x) / 500
        var = sum((float(v) - mean) ** 2 for v in x) / 499
        oracle = var**0.5
        assert abs(sample_std(x) - oracle) <= 1e-12 * oracle

    def test_rejects_short(self):
        with pytest.raises(ValueError):
            sample_std([1.0])


class TestAcf:
    def test_lag_zero_is_one(self):
        x = np.random.default_rng(0).normal(size=50)
        assert acf(x, 10).rho[0] == 1.0

    def test_alternating_series(self):
        x = np.tile([1.0, -1.0], 50)
        result = acf(x, 1)
        assert result.rho[1] == pytest.approx(-0.99, abs=1e-12)

    def test_white_noise_band_coverage(self):
        x = np.random.default_rng(21).normal(size=10_000)
        result = acf(x, 40)
        inside = np.abs(result.rho[1:]) < result.band_halfwidth
        assert inside.mean() >= 0.93

    def test_band_halfwidth(self):
        x = np.random.default_rng(2).normal(size=10_000)
        assert acf(x, 1).band_halfwidth == pytest.approx(0.0196)

    def test_constant_series_distinct_error(self):
        with pytest.raises(ConstantSeriesError):
            acf(np.full(20, 3.0), 5)

    def test_rejects_bad_lag(self):
        with pytest.raises(ValueError):
            acf(np.arange(10.0), 10)

    @given(finite_series, st.floats(min_value=-100, max_value=100))
    @settings(max_examples=50, deadline=None)
    def test_shift_invariance(self, x, shift):
        # spreads far below the shift are absorbed by float rounding
        if x.size < 3 or np.ptp(x) <= 1e-6 * max(1.0, abs(shift)):
            return
        base = acf(x, 2)
        shifted = acf(x + shift, 2)
        np.testing.assert_allclose(shifted.rho, base.rho, rtol=1e-6, atol=1e-6)

    def test_bounded_by_one(self):
        x = np.random.default_rng(5).normal(size=300)
        result = acf(x, 60)
        assert np.all(np.abs(result.rho) <= 1.0 + 1e-12)

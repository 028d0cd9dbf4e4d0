import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trendopt.errors import EmptySeries, InvalidParam, SeriesTooShort
from trendopt.smoothing import (SmoothingParams, holt, holt_winters_additive,
                                ses_error_form, ses_levels)


# --- single exponential smoothing -------------------------------------------

def test_ses_constant_series_is_fixed_point():
    levels = ses_levels([10.0], alpha=0.5, l0=10.0)
    assert levels == pytest.approx([10.0], abs=0)
    levels = ses_levels([3.0] * 25, alpha=0.7, l0=3.0)
    assert np.array_equal(levels, np.full(25, 3.0))


def test_ses_hand_substitution():
    levels = ses_levels([0.0, 1.0], alpha=0.5, l0=0.0)
    assert levels == pytest.approx([0.0, 0.5], abs=1e-15)


def test_ses_alpha_weights_past_level():
    # alpha rides on the PREVIOUS level, 1-alpha on the new observation
    levels = ses_levels([1.0], alpha=0.9, l0=0.0)
    assert levels[0] == pytest.approx(0.1, abs=1e-15)


def test_ses_error_form_hand_substitution():
    forecasts = ses_error_form([1.0], alpha=0.5, f1=0.0)
    assert forecasts == pytest.approx([0.5], abs=1e-15)


def test_ses_error_form_perfect_forecast_is_constant():
    forecasts = ses_error_form([2.0, 2.0, 2.0], alpha=0.3, f1=2.0)
    assert np.array_equal(forecasts, [2.0, 2.0, 2.0])


def test_ses_two_forms_agree_seeded():
    rng = np.random.default_rng(20)
    y = rng.normal(size=300) * 4.0 + 10.0
    l0 = 7.5
    levels = ses_levels(y, alpha=0.42, l0=l0)
    forecasts = ses_error_form(y, alpha=0.42, f1=l0)
    assert np.max(np.abs(levels - forecasts)) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=1, max_size=60),
       st.floats(0.05, 0.95), st.floats(-20, 20))
def test_ses_two_forms_agree_property(values, alpha, l0):
    levels = ses_levels(values, alpha=alpha, l0=l0)
    forecasts = ses_error_form(values, alpha=alpha, f1=l0)
    assert np.max(np.abs(levels - forecasts)) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=1, max_size=60),
       st.floats(0.05, 0.95), st.floats(-20, 20))
def test_ses_level_is_convex_combination(values, alpha, l0):
    levels = ses_levels(values, alpha=alpha, l0=l0)
    prev = l0
    for lev, y in zip(levels, values):
        lo, hi = min(prev, y), max(prev, y)
        assert lo - 1e-12 <= lev <= hi + 1e-12
        prev = lev


def test_ses_rejects_empty_and_bad_alpha():
    with pytest.raises(EmptySeries):
        ses_levels([], alpha=0.5, l0=0.0)
    for alpha in (0.0, 1.0, -0.1, 1.1):
        with pytest.raises(InvalidParam):
            ses_levels([1.0], alpha=alpha, l0=0.0)


# --- Holt linear trend --------------------------------------------------------

def test_holt_linear_series_trend_converges_to_slope():
    y = np.array([2.0 + 3.0 * t for t in range(1, 101)])
    levels, trends, forecasts = holt(y, alpha=0.5, beta=0.5, l0=y[0], b0=3.0)
    assert abs(trends[-1] - 3.0) <= 1e-6
    assert abs(forecasts[-1] - (2.0 + 3.0 * 101)) <= 1e-6


def test_holt_exact_fixed_point_init_tracks_linear_series_everywhere():
    # with l0 = y_0 (the point before the series) and b0 = slope, the
    # recurrences reproduce the line exactly at every step
    slope, intercept = 3.0, 2.0
    y = np.array([intercept + slope * t for t in range(1, 201)])
    levels, trends, forecasts = holt(y, alpha=0.37, beta=0.61,
                                     l0=intercept, b0=slope)
    targets = np.array([intercept + slope * (t + 1) for t in range(1, 201)])
    assert np.max(np.abs(forecasts - targets)) <= 1e-9
    assert np.max(np.abs(trends - slope)) <= 1e-9


def test_holt_constant_series_zero_trend():
    y = np.full(30, 5.0)
    _, trends, _ = holt(y, alpha=0.5, beta=0.5, l0=5.0, b0=0.0)
    assert np.array_equal(trends, np.zeros(30))


def test_holt_single_point():
    levels, trends, forecasts = holt([5.0], alpha=0.5, beta=0.5, l0=5.0, b0=0.0)
    assert forecasts == pytest.approx([5.0], abs=0)


def test_holt_default_initialization():
    y = [4.0, 7.0, 9.0]
    levels, trends, _ = holt(y, alpha=0.5, beta=0.5)
    # defaults l0 = y1 = 4, b0 = y2 - y1 = 3
    assert levels[0] == pytest.approx(0.5 * (4.0 + 3.0) + 0.5 * 4.0, abs=1e-15)


# --- Holt-Winters additive -----------------------------------------------------

def test_hw_parameter_validation():
    with pytest.raises(InvalidParam):
        SmoothingParams(alpha=1.0, beta=0.5, gamma=0.5, cycle=4)
    with pytest.raises(InvalidParam):
        SmoothingParams(alpha=0.5, beta=0.5, gamma=0.5, cycle=1)
    with pytest.raises(InvalidParam):
        SmoothingParams(alpha=0.5, beta=0.5, gamma=0.5, cycle=4, s0=[1.0, 2.0])


def test_hw_series_too_short():
    params = SmoothingParams(alpha=0.5, beta=0.5, gamma=0.5, cycle=4)
    with pytest.raises(SeriesTooShort):
        holt_winters_additive([1.0] * 7, params)


def test_hw_reduces_to_holt_without_seasonality():
    # an exactly linear series with the fixed-point init keeps every seasonal
    # increment at zero, so the recurrences coincide with holt's
    slope, intercept = 1.5, -4.0
    y = np.array([intercept + slope * t for t in range(1, 41)])
    params = SmoothingParams(alpha=0.4, beta=0.3, gamma=0.7, cycle=5,
                             l0=intercept, b0=slope, s0=np.zeros(5))
    levels, trends, seasonals, forecasts = holt_winters_additive(y, params)
    h_levels, h_trends, h_forecasts = holt(y, alpha=0.4, beta=0.3,
                                           l0=intercept, b0=slope)
    assert np.max(np.abs(seasonals)) <= 1e-12
    assert np.max(np.abs(forecasts - h_forecasts)) <= 1e-10
    assert np.max(np.abs(levels - h_levels)) <= 1e-10


def test_hw_pure_seasonal_series_exact():
    pattern = np.array([2.0, -1.0, 0.5, -1.5])
    reps = 8
    level = 10.0
    y = np.tile(pattern, reps) + level
    params = SmoothingParams(alpha=0.3, beta=0.4, gamma=0.6, cycle=4,
                             l0=level, b0=0.0, s0=pattern)
    levels, trends, seasonals, forecasts = holt_winters_additive(y, params)
    # forecast of y_{t+1} is exact from the very first step
    assert np.max(np.abs(forecasts[:-1] - y[1:])) <= 1e-12
    assert np.max(np.abs(trends)) <= 1e-12


def test_hw_constant_series_exact_init_constant_forecasts():
    y = np.full(24, 7.0)
    params = SmoothingParams(alpha=0.5, beta=0.5, gamma=0.5, cycle=6,
                             l0=7.0, b0=0.0, s0=np.zeros(6))
    _, _, _, forecasts = holt_winters_additive(y, params)
    assert np.array_equal(forecasts, np.full(24, 7.0))


def test_hw_default_initialization_values():
    cycle = 4
    y = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0])
    params = SmoothingParams(alpha=0.5, beta=0.5, gamma=0.5, cycle=cycle)
    levels, trends, seasonals, forecasts = holt_winters_additive(y, params)
    l0 = 2.5                      # mean of first cycle
    b0 = (6.5 - 2.5) / 4          # cycle-mean difference / cycle
    s0_first = 1.0 - 2.5
    expected_l1 = 0.5 * (l0 + b0) + 0.5 * (y[0] - s0_first)
    assert levels[0] == pytest.approx(expected_l1, abs=1e-15)

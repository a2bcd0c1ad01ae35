import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from gdpgrowth import (
    AnnualSeries,
    DomainError,
    InversionSetup,
    InversionUpdate,
    RangeError,
    TrendSpec,
    Unit,
    fit_initial_count,
    predict_growth,
    recover_population,
    recover_population_percap,
)
from gdpgrowth.model_utils import band_coverage, grid_search, rmse


def rates(start, values):
    return AnnualSeries(start_year=start, values=values, unit=Unit.RATE_PER_YEAR)


def random_case(rng):
    """随机人口序列、人均GDP序列与趋势设定"""
    n = int(rng.integers(10, 100))
    start = int(rng.integers(1900, 1990))
    cohort = AnnualSeries(start_year=start,
                          values=rng.uniform(5e5, 5e6) * np.exp(np.cumsum(rng.normal(0, 0.04, n))),
                          unit=Unit.PERSONS)
    gpc = AnnualSeries(start_year=start,
                       values=rng.uniform(3e3, 1e4) + np.cumsum(rng.uniform(100, 800, n)),
                       unit=Unit.DOLLARS_REAL)
    if rng.random() < 0.5:
        trend = TrendSpec.reciprocal(int(rng.integers(start, start + n)), float(rng.uniform(20, 60)))
    else:
        trend = TrendSpec.constant_increment(float(rng.uniform(200, 700)))
    return cohort, gpc, trend


def test_round_trip_recovers_cohort_exactly(rng):
    for _ in range(200):
        cohort, gpc, trend = random_case(rng)
        g = predict_growth(cohort, trend, gpc)
        setup = InversionSetup(initial_year=cohort.start_year, initial_count=cohort.values[0],
                               trend=trend, observed_growth=g)
        recovered = recover_population(setup, gpc)
        assert recovered.year_range == cohort.year_range
        assert_allclose(recovered.array, cohort.array, rtol=1e-10)


def test_constant_growth_at_trend_keeps_population_flat():
    setup = InversionSetup(initial_year=2000, initial_count=4e6,
                           trend=TrendSpec.reciprocal(2004, 40),
                           observed_growth=rates(2001, [0.025] * 5))
    recovered = recover_population(setup)
    assert recovered.year_range == (2000, 2005)
    assert_allclose(recovered.array, 4e6)


def test_exponential_and_linear_updates():
    setup = InversionSetup(initial_year=2000, initial_count=1e6,
                           trend=TrendSpec.reciprocal(2004, 40),
                           observed_growth=rates(2001, [0.035]))
    exp_ = recover_population(setup)
    lin = recover_population(setup, update=InversionUpdate.LINEAR)
    assert exp_.values[1] == pytest.approx(1e6 * math.exp(0.02))
    assert lin.values[1] == pytest.approx(1e6 * 1.02)


def test_linear_update_rejects_nonpositive_population():
    setup = InversionSetup(initial_year=2000, initial_count=1e6,
                           trend=TrendSpec.reciprocal(2004, 40),
                           observed_growth=rates(2001, [-0.6]))
    with pytest.raises(DomainError) as err:
        recover_population(setup, update="linear")
    assert err.value.year == 2001
    # 指数更新恒为正
    assert recover_population(setup).values[1] > 0


def test_recovery_is_proportional_to_initial_count():
    g = rates(1951, [0.03, 0.01, -0.02, 0.05])
    trend = TrendSpec.reciprocal(1951, 40)
    a = recover_population(InversionSetup(initial_year=1950, initial_count=1e6, trend=trend, observed_growth=g))
    b = recover_population(InversionSetup(initial_year=1950, initial_count=3e6, trend=trend, observed_growth=g))
    assert_allclose(b.array, 3 * a.array)


def test_setup_validation():
    trend = TrendSpec.reciprocal(2004, 40)
    with pytest.raises(ValidationError):
        InversionSetup(initial_year=2000, initial_count=0, trend=trend, observed_growth=rates(2001, [0.02]))
    with pytest.raises(ValidationError):
        InversionSetup(initial_year=2005, initial_count=1, trend=trend, observed_growth=rates(2001, [0.02]))
    with pytest.raises(ValidationError):
        InversionSetup(initial_year=2000, initial_count=1, trend=trend,
                       observed_growth=AnnualSeries(start_year=2001, values=[1.0], unit=Unit.PERSONS))


def test_growth_gap_after_initial_year_is_range_error():
    setup = InversionSetup(initial_year=1990, initial_count=1e6, trend=TrendSpec.reciprocal(2004, 40),
                           observed_growth=rates(1995, [0.02, 0.03]))
    with pytest.raises(RangeError):
        recover_population(setup)


def test_percap_inversion_requires_constant_increment():
    gpc = AnnualSeries(start_year=2000, values=[20_000, 20_400, 20_800], unit=Unit.DOLLARS_REAL)
    setup = InversionSetup(initial_year=2000, initial_count=1e6,
                           trend=TrendSpec.constant_increment(400),
                           observed_growth=rates(2001, [400 / 20_400, 400 / 20_800]))
    assert_allclose(recover_population_percap(setup, gpc).array, 1e6)
    with pytest.raises(DomainError):
        recover_population_percap(setup.model_copy(update={"trend": TrendSpec.reciprocal(2000, 40)}), gpc)


def test_fit_initial_count_recovers_known_value(rng):
    for _ in range(100):
        cohort, gpc, trend = random_case(rng)
        g = predict_growth(cohort, trend, gpc)
        n0 = float(rng.uniform(1e6, 6e6))
        setup = InversionSetup(initial_year=cohort.start_year, initial_count=n0, trend=trend, observed_growth=g)
        target = recover_population(setup, gpc)
        window = (target.start_year + len(target) // 2, target.end_year)
        fit = fit_initial_count((5e5, 8e6), target, window, setup, gpc)
        assert abs(fit.initial_count - n0) <= 1000
        assert fit.band_coverage == 1.0
        assert fit.window == window


def test_grid_method_agrees_with_golden():
    g = rates(1951, [0.03, 0.01, -0.02, 0.05, 0.04])
    trend = TrendSpec.reciprocal(1951, 40)
    setup = InversionSetup(initial_year=1950, initial_count=3_750_000, trend=trend, observed_growth=g)
    target = recover_population(setup)
    golden = fit_initial_count((3.5e6, 4e6), target, (1952, 1955), setup)
    grid = fit_initial_count((3.5e6, 4e6), target, (1952, 1955), setup, method="grid", workers=2)
    assert golden.initial_count == pytest.approx(3_750_000, abs=1000)
    assert grid.initial_count == pytest.approx(3_750_000, abs=1000)
    assert grid.method == "grid"
    assert grid.evaluations == 501


def test_fit_initial_count_without_overlap():
    g = rates(1951, [0.03, 0.01])
    setup = InversionSetup(initial_year=1950, initial_count=1e6, trend=TrendSpec.reciprocal(1951, 40),
                           observed_growth=g)
    target = AnnualSeries(start_year=1980, values=[1e6, 1e6], unit=Unit.PERSONS)
    with pytest.raises(RangeError):
        fit_initial_count((5e5, 2e6), target, (1980, 1981), setup)


@pytest.mark.parametrize("method", ["golden", "grid"])
@pytest.mark.parametrize("resolution", [0, -5, float("nan")])
def test_fit_initial_count_rejects_nonpositive_resolution(method, resolution):
    g = rates(1951, [0.03, 0.01, -0.02])
    setup = InversionSetup(initial_year=1950, initial_count=1e6, trend=TrendSpec.reciprocal(1951, 40),
                           observed_growth=g)
    target = recover_population(setup)
    with pytest.raises(DomainError):
        fit_initial_count((5e5, 2e6), target, (1951, 1953), setup, method=method, resolution=resolution)


def test_fit_initial_count_rejects_unknown_method():
    g = rates(1951, [0.03, 0.01])
    setup = InversionSetup(initial_year=1950, initial_count=1e6, trend=TrendSpec.reciprocal(1951, 40),
                           observed_growth=g)
    with pytest.raises(DomainError):
        fit_initial_count((5e5, 2e6), recover_population(setup), (1951, 1952), setup, method="newton")


def test_search_helpers_raise_domain_error():
    with pytest.raises(DomainError):
        grid_search(lambda x: x * x, 0, 1, -0.1)
    with pytest.raises(DomainError):
        rmse([], [])
    with pytest.raises(DomainError):
        band_coverage([], [])

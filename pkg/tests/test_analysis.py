import logging

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gdpgrowth import (
    AnnualSeries,
    DomainError,
    Unit,
    UnitMismatchError,
    compounding_demo,
    decompose,
    interpolate_ratios,
    percap_correction,
    trend_share_growth,
)


def test_usa_decomposition():
    # 1950-2002 年 9 岁人口与人均GDP
    # 印刷值 N(1950) = 24,022,326 多了一位，人口分量 0.37 对应的是 2,402,326
    report = decompose(2_402_326, 4_173_171, 12_123, 38_345, 52, period=(1950, 2002),
                       total_basis="increase", mean_increment=485)
    assert report.population_component == pytest.approx(0.369, abs=0.005)
    assert report.trend_component == pytest.approx(1.79, abs=0.01)
    assert report.mean_increment == pytest.approx(485, abs=1)
    assert report.trend_dollars == pytest.approx(401, abs=2)
    assert report.population_dollars == pytest.approx(84, abs=2)
    assert report.period == (1950, 2002)


def test_france_decomposition():
    report = decompose(649_011, 801_095, 7_009, 28_956, 51, period=(1950, 2001), mean_increment=406)
    assert report.total_basis == "ratio"
    assert report.population_component == pytest.approx(0.117, abs=0.005)
    assert report.population_share == pytest.approx(0.029, abs=0.002)
    assert report.trend_dollars == pytest.approx(394, abs=2)


def test_decomposition_components_sum():
    report = decompose(1e6, 1.2e6, 10_000, 20_000, 10)
    assert report.population_component + report.trend_component == pytest.approx(report.total_factor)
    assert report.trend_dollars + report.population_dollars == pytest.approx(report.mean_increment)
    assert report.mean_increment == 1000
    assert report.period == (0, 10)
    assert set(report.as_dict()) >= {"population_share", "dollar_split_method"}


def test_decomposition_rejects_invalid_inputs():
    with pytest.raises(DomainError):
        decompose(0, 1e6, 1, 2, 10)
    with pytest.raises(DomainError):
        decompose(1e6, 1e6, 1, 2, 0)
    with pytest.raises(DomainError):
        decompose(1e6, 1e6, 1, 2, 10, total_basis="log")
    with pytest.raises(DomainError):
        decompose(1e6, 1e6, 5, 5, 10, total_basis="increase")


def test_trend_share_growth_scales_observed():
    report = decompose(1e6, 1.2e6, 10_000, 20_000, 10)
    g = AnnualSeries(start_year=2001, values=[0.02, 0.04], unit=Unit.RATE_PER_YEAR)
    scaled = trend_share_growth(g, report)
    assert_allclose(scaled.array, g.array * report.trend_component / report.total_factor)


def test_interpolate_ratios(caplog):
    anchors = {1930: 1.41, 1950: 1.37, 2002: 1.27}
    with caplog.at_level(logging.WARNING):
        ratios = interpolate_ratios(anchors, (1929, 2004))
    assert ratios.unit == Unit.DIMENSIONLESS
    assert ratios.value_at(1929) == pytest.approx(1.41)
    assert ratios.value_at(1940) == pytest.approx(1.39)
    assert ratios.value_at(2004) == pytest.approx(1.27)
    assert "端点值" in caplog.text
    with pytest.raises(DomainError):
        interpolate_ratios({}, (1950, 1960))


def test_percap_correction():
    gpc = AnnualSeries(start_year=1950, values=[12_123, 12_500], unit=Unit.DOLLARS_REAL, base="2002 US dollars")
    ratios = AnnualSeries(start_year=1950, values=[1.37, 1.36], unit=Unit.DIMENSIONLESS)
    corrected = percap_correction(gpc, ratios)
    assert_allclose(corrected.array, [12_123 * 1.37, 12_500 * 1.36])
    assert corrected.base == "2002 US dollars"
    with pytest.raises(DomainError) as err:
        percap_correction(gpc, ratios.with_values([1.2, 0.9]))
    assert err.value.year == 1951
    with pytest.raises(UnitMismatchError):
        percap_correction(gpc, gpc)


def test_compounding_pitfall():
    result = compounding_demo(0.02, 0.05, 50, compare_mean=0.019)
    assert result.total_factor_oscillating == pytest.approx(((1.02) ** 2 - 0.05 ** 2) ** 25, rel=1e-12)
    assert result.total_factor_oscillating == pytest.approx(2.5345, abs=1e-4)
    assert result.total_factor_smooth == pytest.approx(2.6916, abs=1e-4)
    assert result.closed_form == pytest.approx(result.total_factor_oscillating, rel=1e-12)
    # 1.9% 平滑增长仍高于 2% 振荡增长
    assert result.comparison_smooth == pytest.approx(2.5628, abs=1e-4)
    assert result.comparison_smooth > result.total_factor_oscillating


def test_compounding_comparison_arm_oscillates():
    result = compounding_demo(0.02, 0.05, 50, compare_mean=0.019, compare_amplitude=0.01)
    assert result.comparison_oscillating == pytest.approx((1.019 ** 2 - 0.01 ** 2) ** 25, rel=1e-12)


def test_compounding_rejects_bad_inputs():
    with pytest.raises(DomainError):
        compounding_demo(0.02, 0.05, 49)
    with pytest.raises(DomainError):
        compounding_demo(0.02, 0.05, 0)
    with pytest.raises(DomainError):
        compounding_demo(0.02, 1.5, 10)


def test_zero_amplitude_matches_smooth():
    result = compounding_demo(0.03, 0.0, 20)
    assert result.total_factor_oscillating == pytest.approx(result.total_factor_smooth, rel=1e-12)
    assert np.isclose(result.closed_form, 1.03 ** 20)


def test_decomposition_identities_hold_for_random_inputs(rng):
    for _ in range(300):
        n0, n1 = rng.uniform(1e5, 1e7, 2)
        g0, g1 = rng.uniform(1e3, 5e4, 2)
        years = int(rng.integers(1, 80))
        basis = "ratio" if rng.random() < 0.5 else "increase"
        if basis == "increase" and abs(g1 / g0 - 1) < 1e-3:
            continue
        report = decompose(n0, n1, g0, g1, years, total_basis=basis)
        assert report.population_component + report.trend_component == pytest.approx(report.total_factor)
        assert report.trend_dollars + report.population_dollars == pytest.approx(report.mean_increment)
        assert report.mean_increment == pytest.approx((g1 - g0) / years)
        assert report.population_component == pytest.approx(0.5 * (n1 - n0) / n0)
        assert report.population_share == pytest.approx(report.population_component / report.total_factor)


def test_percap_correction_is_linear(rng):
    for _ in range(100):
        n = int(rng.integers(1, 60))
        a = AnnualSeries(start_year=1950, values=rng.uniform(1e3, 4e4, n), unit=Unit.DOLLARS_REAL)
        b = a.with_values(rng.uniform(1e3, 4e4, n))
        ratios = AnnualSeries(start_year=1950, values=rng.uniform(1.0, 1.6, n), unit=Unit.DIMENSIONLESS)
        c = float(rng.uniform(0.1, 10))
        assert_allclose(percap_correction(a * c, ratios).array, c * percap_correction(a, ratios).array,
                        rtol=1e-12)
        summed = a.with_values(a.array + b.array)
        assert_allclose(percap_correction(summed, ratios).array,
                        percap_correction(a, ratios).array + percap_correction(b, ratios).array, rtol=1e-12)


def test_oscillation_never_beats_smooth_growth(rng):
    for _ in range(300):
        mean = float(rng.uniform(-0.05, 0.1))
        amplitude = float(rng.uniform(0, 0.2))
        years = 2 * int(rng.integers(1, 50))
        result = compounding_demo(mean, amplitude, years)
        assert result.total_factor_oscillating <= result.total_factor_smooth * (1 + 1e-12)
        assert result.closed_form == pytest.approx(result.total_factor_oscillating, rel=1e-9)

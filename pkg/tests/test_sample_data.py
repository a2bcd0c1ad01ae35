"""随附样例数据上的检查"""

import numpy as np
import pytest

from gdpgrowth import (
    ChangeConvention,
    InversionSetup,
    Unit,
    calibrate_defining_age,
    change,
    cohort_series_by_age,
    fit_initial_count,
    fit_trend_preserving,
    interpolate_ratios,
    mean_increment,
    percap_correction,
    predict_growth,
    predict_growth_percap,
    project_cohort,
    read_config,
    read_pyramid,
    read_series,
    recover_population,
    recover_population_percap,
)


@pytest.fixture
def gpc(usa_config):
    return read_series(usa_config.file("gdp_percap"), Unit.DOLLARS_REAL, usa_config.dollar_base)


@pytest.fixture
def growth(usa_config):
    return read_series(usa_config.file("gdp_growth"), Unit.RATE_PER_YEAR)


def local_minimum_near(series, year):
    for y in (year - 1, year, year + 1):
        if series.value_at(y) < series.value_at(y - 1) and series.value_at(y) < series.value_at(y + 1):
            return True
    return False


@pytest.mark.parametrize("census, recession", [(1990, 1991), (2000, 2001)])
def test_predicted_growth_shows_recession(usa_config, gpc, census, recession):
    cohort = project_cohort(read_pyramid(usa_config.pyramid_file(census)), usa_config.defining_age).series
    predicted = predict_growth(cohort, usa_config.trend(), gpc, usa_config.change_convention)
    assert local_minimum_near(predicted, recession)


@pytest.mark.parametrize("start, expected", [(1951, 535), (1931, 399)])
def test_trend_constant_on_corrected_percap(usa_config, gpc, start, expected):
    corrected = percap_correction(gpc, interpolate_ratios(usa_config.correction_ratios, gpc.year_range))
    g = change(corrected, usa_config.change_convention)
    A = fit_trend_preserving(g.window(start, 2002), corrected)
    assert A == pytest.approx(expected, abs=15)


def test_initial_count_against_1980_pyramid(usa_config, gpc, growth):
    target = project_cohort(read_pyramid(usa_config.pyramid_file(1980)), 9).series
    setup = InversionSetup(initial_year=1951, initial_count=1e6, trend=usa_config.trend(), observed_growth=growth)
    fit = fit_initial_count((1e6, 1e7), target, (1970, 1989), setup, gpc)
    assert fit.initial_count == pytest.approx(3_750_000, rel=0.05)
    assert fit.window == (1970, 1989)
    assert fit.band_coverage == 1.0


def test_inversion_meets_2000_projection(usa_config, gpc, growth):
    setup = InversionSetup(initial_year=1951, initial_count=3_800_000, trend=usa_config.trend(),
                           observed_growth=growth)
    recovered = recover_population(setup, gpc).window(1996, 2001)
    projected = project_cohort(read_pyramid(usa_config.pyramid_file(2000)), 9, (1996, 2001)).series
    rel = np.abs(recovered.array / projected.array - 1)
    assert np.all(rel <= 0.05)


@pytest.mark.parametrize("census", [1980, 1990, 2000])
def test_age_search_selects_nine(usa_config, gpc, growth, census):
    cohorts = cohort_series_by_age(read_pyramid(usa_config.pyramid_file(census)), range(1, 26))
    result = calibrate_defining_age(cohorts, growth, usa_config.trend(), gpc,
                                    usa_config.calibration_window, usa_config.change_convention)
    assert usa_config.calibration_window == (1951, 2004)
    assert result.best_age == usa_config.defining_age == 9
    assert result.runner_up_margin > 0.01


@pytest.fixture
def france_config(data_dir):
    return read_config(data_dir / "france" / "france.env")


@pytest.fixture
def uk_config(data_dir):
    return read_config(data_dir / "uk" / "uk.env")


def percap_inputs(config):
    gpc = read_series(config.file("gdp_percap"), Unit.DOLLARS_REAL, config.dollar_base)
    return gpc, change(gpc, config.change_convention)


@pytest.mark.parametrize("country, expected", [("usa", 485), ("france", 405), ("uk", 378)])
def test_mean_increment_by_country(data_dir, country, expected):
    config = read_config(data_dir / country / f"{country}.env")
    gpc = read_series(config.file("gdp_percap"), Unit.DOLLARS_REAL, config.dollar_base)
    assert mean_increment(gpc.window(1950, 2004)) == pytest.approx(expected, abs=1)


def test_france_defining_age_is_eighteen(france_config):
    gpc, g = percap_inputs(france_config)
    cohorts = cohort_series_by_age(read_pyramid(france_config.pyramid_file(2000)), range(1, 26))
    result = calibrate_defining_age(cohorts, g, france_config.trend(percap=True), gpc,
                                    change_convention=france_config.change_convention)
    assert france_config.change_convention == ChangeConvention.RELATIVE
    assert result.best_age == france_config.defining_age == 18
    assert result.runner_up_margin > 0.01


@pytest.mark.parametrize("census", [1981, 1993, 2001])
def test_uk_defining_age_is_nine(uk_config, census):
    gpc, g = percap_inputs(uk_config)
    cohorts = cohort_series_by_age(read_pyramid(uk_config.pyramid_file(census)), range(1, 26))
    result = calibrate_defining_age(cohorts, g, uk_config.trend(percap=True), gpc,
                                    change_convention=uk_config.change_convention)
    assert result.best_age == uk_config.defining_age == 9
    assert result.runner_up_margin > 0.01


@pytest.mark.parametrize("country, census, recession", [("france", 2000, 1993), ("uk", 1981, 1981)])
def test_percap_prediction_shows_recession(data_dir, country, census, recession):
    config = read_config(data_dir / country / f"{country}.env")
    gpc, _ = percap_inputs(config)
    cohort = project_cohort(read_pyramid(config.pyramid_file(census)), config.defining_age).series
    predicted = predict_growth_percap(cohort, config.trend_A, gpc, config.change_convention)
    assert local_minimum_near(predicted, recession)


def test_france_percap_inversion_follows_projection(france_config):
    gpc, g = percap_inputs(france_config)
    projected = project_cohort(read_pyramid(france_config.pyramid_file(2000)), 18, (1950, 2004)).series
    # 1950 年 18 岁 649,011 人，2001 年 801,095 人
    assert projected.value_at(1950) == 649_011
    assert projected.value_at(2001) == 801_095
    setup = InversionSetup(initial_year=1950, initial_count=projected.value_at(1950),
                           trend=france_config.trend(percap=True), observed_growth=g)
    recovered = recover_population_percap(setup, gpc, france_config.inversion_update)
    assert recovered.year_range == (1950, 2004)
    rel = np.abs(recovered.array / projected.array - 1)
    assert np.all(rel <= 0.05)

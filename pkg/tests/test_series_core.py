import math

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from gdpgrowth import (
    AgePyramid,
    AlignmentError,
    AnnualSeries,
    ChangeConvention,
    DomainError,
    RangeError,
    Unit,
    UnitMismatchError,
    accumulate,
    align,
    log_change,
    relative_change,
)
from pydantic import ValidationError


def series(start, values, unit=Unit.PERSONS, base=None):
    return AnnualSeries(start_year=start, values=values, unit=unit, base=base)


def test_relative_change_simple_step():
    out = relative_change(series(2000, [100, 102]))
    assert out.start_year == 2001
    assert out.unit == Unit.RATE_PER_YEAR
    assert_allclose(out.array, [0.02])


def test_relative_change_constant_series_is_zero():
    out = relative_change(series(2000, [5, 5, 5]))
    assert_allclose(out.array, [0.0, 0.0])


def test_usa_percap_factor_from_recompounded_changes():
    gpc = series(1950, np.linspace(12123, 38345, 53), Unit.DOLLARS_REAL, "2002 US dollars")
    rebuilt = accumulate(relative_change(gpc), 12123, Unit.DOLLARS_REAL)
    assert rebuilt.values[-1] / rebuilt.values[0] - 1 == pytest.approx(2.16, abs=0.005)


def test_relative_change_rejects_nonpositive_with_year():
    with pytest.raises(DomainError) as err:
        relative_change(series(2000, [3, 0, 2], Unit.DOLLARS_REAL))
    assert err.value.year == 2001


def test_change_needs_two_points():
    with pytest.raises(DomainError):
        log_change(series(2000, [4]))


def test_log_change_of_e():
    out = log_change(series(2000, [1, math.e], Unit.DIMENSIONLESS))
    assert_allclose(out.array, [1.0])
    assert_allclose(log_change(series(2000, [5, 5])).array, [0.0])


def test_log_change_exp_accumulates_to_end_ratio(rng):
    values = np.exp(np.cumsum(rng.normal(0, 0.05, 60))) * 1e6
    s = series(1940, values)
    total = math.exp(np.sum(log_change(s).array))
    assert total == pytest.approx(values[-1] / values[0], rel=1e-12)


def test_relative_recompounding_reconstructs_series(rng):
    values = 1e5 * np.exp(np.cumsum(rng.normal(0.01, 0.03, 80)))
    s = series(1920, values)
    rebuilt = accumulate(relative_change(s), values[0], Unit.PERSONS)
    assert rebuilt.year_range == s.year_range
    assert_allclose(rebuilt.array, values, rtol=1e-10)


def test_log_and_relative_agree_to_first_order(rng):
    values = 1e6 * np.cumprod(1 + rng.uniform(-0.01, 0.01, 200))
    s = series(1800, values)
    r = relative_change(s).array
    lg = log_change(s).array
    assert np.all(np.abs(lg - r) <= r ** 2 + 1e-15)


def test_accumulate_log_convention():
    rates = series(2001, [math.log(2), math.log(3)], Unit.RATE_PER_YEAR)
    out = accumulate(rates, 1.0, Unit.DIMENSIONLESS, ChangeConvention.LOG)
    assert out.start_year == 2000
    assert_allclose(out.array, [1, 2, 6])


def test_align_overlap():
    a = series(1950, np.ones(51))
    b = series(1960, np.ones(51))
    a2, b2 = align(a, b)
    assert a2.year_range == (1960, 2000)
    assert b2.year_range == (1960, 2000)


def test_align_identical_and_idempotent():
    a = series(1950, [1, 2, 3])
    b = series(1950, [4, 5, 6])
    a2, b2 = align(a, b)
    assert a2 == a and b2 == b
    assert align(a2, b2) == (a2, b2)
    b3, a3 = align(b, a)
    assert (a3, b3) == (a2, b2)


def test_align_disjoint_names_both_ranges():
    with pytest.raises(AlignmentError, match="1950-1955.*1956-1960"):
        align(series(1950, np.ones(6)), series(1956, np.ones(5)))


def test_series_rejects_invalid_values():
    with pytest.raises(ValidationError):
        series(2000, [])
    with pytest.raises(ValidationError):
        series(2000, [1.0, float("nan")])
    with pytest.raises(ValidationError):
        series(2000, [-1.0])
    # 增长率可以为负
    assert series(2000, [-0.05], Unit.RATE_PER_YEAR).values == (-0.05,)


def test_value_at_and_window():
    s = series(2000, [1, 2, 3, 4])
    assert s.end_year == 2003
    assert s.value_at(2002) == 3
    with pytest.raises(RangeError):
        s.value_at(1999)
    w = s.window(2001, 2002)
    assert w.year_range == (2001, 2002)
    assert w.values == (2.0, 3.0)
    assert list(s.window(2002)) == [(2002, 3.0), (2003, 4.0)]


def test_arithmetic_unit_rules():
    gdp = series(2000, [100.0, 110.0], Unit.DOLLARS_REAL, "2002 US dollars")
    pop = series(1999, [4.0, 5.0, 10.0], Unit.PERSONS)
    gpc = gdp / pop
    assert gpc.unit == Unit.DOLLARS_REAL
    assert gpc.base == "2002 US dollars"
    assert gpc.year_range == (2000, 2001)
    assert_allclose(gpc.array, [20.0, 11.0])
    assert (gdp / gdp).unit == Unit.DIMENSIONLESS
    with pytest.raises(UnitMismatchError):
        gdp + pop
    with pytest.raises(UnitMismatchError):
        gdp * pop


def test_arithmetic_rejects_mixed_dollar_bases():
    a = series(2000, [1.0], Unit.DOLLARS_REAL, "2002 US dollars")
    b = series(2000, [1.0], Unit.DOLLARS_REAL, "1996 US dollars")
    with pytest.raises(UnitMismatchError):
        a - b


def test_pandas_conversion():
    s = series(1990, [1.0, 2.0, 3.0])
    ps = s.to_pandas()
    assert list(ps.index) == [1990, 1991, 1992]
    assert AnnualSeries.from_pandas(ps, Unit.PERSONS) == s
    with pytest.raises(RangeError):
        AnnualSeries.from_pandas(pd.Series([1.0, 2.0], index=[1990, 1992]), Unit.PERSONS)


def test_age_pyramid_invariants():
    p = AgePyramid(reference_year=2000, counts={0: 10, 1: 12, 2: 9})
    assert p.max_age == 2
    assert p.count_at(1) == 12
    with pytest.raises(DomainError):
        p.count_at(3)
    with pytest.raises(ValidationError):
        AgePyramid(reference_year=2000, counts={0: 10, 2: 9})
    with pytest.raises(ValidationError):
        AgePyramid(reference_year=2000, counts={0: 10, 1: -1})

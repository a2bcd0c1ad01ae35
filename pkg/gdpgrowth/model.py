"""正向预测：由定义年龄人口序列与经济趋势项计算实际GDP增长率

g(t) = 0.5·ΔN(t)/N(t) + 1/T_cr(t)          总量GDP
g_pc(t) = 0.5·ΔN(t)/N(t) + A/G_pc(t)        人均GDP
T_cr(t) = T_cr(t0)·sqrt(G_pc(t)/G_pc(t0))   随人均实际GDP增益的平方根演化
"""

import logging
import math
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import DomainError, RangeError, UnitMismatchError
from .model_utils import band_coverage, correlation, rmse
from .series_core import AnnualSeries, ChangeConvention, Unit, align, change

logger = logging.getLogger(__name__)


class TcrAnchor(BaseModel):
    """T_cr 锚点，例如美国 2004 年为 40 年"""

    model_config = ConfigDict(frozen=True)

    anchor_year: int
    anchor_value: float = Field(gt=0)


class TrendKind(str, Enum):
    RECIPROCAL_TCR = "reciprocal_tcr"
    CONSTANT_INCREMENT = "constant_increment"


class TrendSpec(BaseModel):
    """趋势项：1/T_cr（总量GDP）或 A/G_pc（人均GDP）"""

    model_config = ConfigDict(frozen=True)

    kind: TrendKind
    tcr_anchor: Optional[TcrAnchor] = None
    A: Optional[float] = None

    @model_validator(mode="after")
    def _check_params(self):
        if self.kind == TrendKind.RECIPROCAL_TCR:
            if self.tcr_anchor is None or self.A is not None:
                raise ValueError("reciprocal_tcr 趋势只能也必须给出 tcr_anchor")
        else:
            if self.A is None or self.tcr_anchor is not None:
                raise ValueError("constant_increment 趋势只能也必须给出 A")
            if not math.isfinite(self.A):
                raise ValueError(f"A 必须为有限值: {self.A}")
        return self

    @property
    def nonpositive_increment(self) -> bool:
        return self.kind == TrendKind.CONSTANT_INCREMENT and self.A <= 0

    @classmethod
    def reciprocal(cls, anchor_year: int, anchor_value: float) -> "TrendSpec":
        return cls(kind=TrendKind.RECIPROCAL_TCR,
                   tcr_anchor=TcrAnchor(anchor_year=anchor_year, anchor_value=anchor_value))

    @classmethod
    def constant_increment(cls, A: float) -> "TrendSpec":
        return cls(kind=TrendKind.CONSTANT_INCREMENT, A=A)


class ModelRun(BaseModel):
    """一次预测或反演的观测/预测序列及拟合诊断"""

    model_config = ConfigDict(frozen=True)

    label: str
    predicted: Optional[AnnualSeries] = None
    observed: Optional[AnnualSeries] = None
    rmse: Optional[float] = None
    correlation: Optional[float] = None
    band_coverage: Optional[float] = None

    def rows(self):
        """(year, observed, predicted, residual) 行，无观测值时 observed/residual 为 nan"""
        out = []
        if self.predicted is None:
            return out
        for year, pred in self.predicted:
            if self.observed is not None and self.observed.covers(year):
                obs = self.observed.value_at(year)
                out.append((year, obs, pred, obs - pred))
            else:
                out.append((year, float("nan"), pred, float("nan")))
        return out


def build_run(label: str, predicted: AnnualSeries, observed: Optional[AnnualSeries] = None,
              band: Optional[float] = None) -> ModelRun:
    """对齐观测与预测并计算 RMSE、相关系数，给出 band 时计算落入不确定带的比例"""
    if observed is None:
        return ModelRun(label=label, predicted=predicted)
    obs, pred = align(observed, predicted)
    return ModelRun(
        label=label,
        predicted=pred,
        observed=obs,
        rmse=rmse(obs.array, pred.array),
        correlation=correlation(obs.array, pred.array),
        band_coverage=band_coverage(obs.array, pred.array, band) if band is not None else None,
    )


def trend_term(tcr: float) -> float:
    """经济趋势项 1/T_cr"""
    if not tcr > 0:
        raise DomainError(f"T_cr 必须为正: {tcr}")
    return 1.0 / tcr


def _check_gpc(gpc_series: AnnualSeries) -> None:
    if gpc_series.unit != Unit.DOLLARS_REAL:
        raise UnitMismatchError(f"人均GDP序列单位应为 dollars_real，实际为 {gpc_series.unit.value}")
    arr = gpc_series.array
    bad = np.flatnonzero(arr <= 0)
    if bad.size:
        year = gpc_series.start_year + int(bad[0])
        raise DomainError(f"{year} 年人均GDP非正: {arr[bad[0]]}", year=year)


def evolve_tcr(anchor: TcrAnchor, gpc_series: AnnualSeries) -> AnnualSeries:
    """T_cr(t) = T_cr(锚点) · sqrt(G_pc(t) / G_pc(锚点年))，锚点前后均适用"""
    _check_gpc(gpc_series)
    if not gpc_series.covers(anchor.anchor_year):
        raise RangeError(
            f"锚点年 {anchor.anchor_year} 不在人均GDP序列 {gpc_series.start_year}-{gpc_series.end_year} 内"
        )
    ratio = gpc_series.array / gpc_series.value_at(anchor.anchor_year)
    return AnnualSeries(start_year=gpc_series.start_year,
                        values=anchor.anchor_value * np.sqrt(ratio),
                        unit=Unit.YEARS)


def trend_series(trend: TrendSpec, gpc_series: Optional[AnnualSeries],
                 years: Optional[Tuple[int, int]] = None) -> AnnualSeries:
    """逐年趋势项序列

    reciprocal_tcr 且未给出人均GDP序列时，T_cr 固定为锚点值，覆盖 years 区间。
    """
    if trend.kind == TrendKind.RECIPROCAL_TCR:
        if gpc_series is None:
            if years is None:
                raise RangeError("未给出人均GDP序列时必须指定年份区间")
            value = trend_term(trend.tcr_anchor.anchor_value)
            return AnnualSeries(start_year=years[0], values=[value] * (years[1] - years[0] + 1),
                                unit=Unit.RATE_PER_YEAR)
        tcr = evolve_tcr(trend.tcr_anchor, gpc_series)
        return AnnualSeries(start_year=tcr.start_year, values=1.0 / tcr.array,
                            unit=Unit.RATE_PER_YEAR)
    if gpc_series is None:
        raise RangeError("A/G 趋势需要人均GDP序列")
    _check_gpc(gpc_series)
    if trend.nonpositive_increment:
        logger.warning(f"常数增量 A={trend.A} 非正")
    return AnnualSeries(start_year=gpc_series.start_year, values=trend.A / gpc_series.array,
                        unit=Unit.RATE_PER_YEAR)


def predict_growth(cohort: AnnualSeries, trend: TrendSpec,
                   gpc_series: Optional[AnnualSeries] = None,
                   change_convention: ChangeConvention = ChangeConvention.LOG) -> AnnualSeries:
    """公式(1)：g(t) = 0.5·Δ(t) + trend(t)

    参数:
    - cohort: 定义年龄人口序列（persons），至少两个点
    - trend: 趋势设定，T_cr 由 evolve_tcr 按观测人均GDP计算（回算模式）
    - gpc_series: 人均实际GDP序列
    - change_convention: 人口变化的离散化约定

    返回:
    - 年增长率序列，覆盖各输入年份的交集
    """
    if cohort.unit != Unit.PERSONS:
        raise UnitMismatchError(f"人口序列单位应为 persons，实际为 {cohort.unit.value}")
    delta = change(cohort, change_convention)
    tr = trend_series(trend, gpc_series, delta.year_range)
    delta, tr = align(delta, tr)
    return AnnualSeries(start_year=delta.start_year,
                        values=0.5 * delta.array + tr.array,
                        unit=Unit.RATE_PER_YEAR)


def predict_growth_percap(cohort: AnnualSeries, A: float, gpc_series: AnnualSeries,
                          change_convention: ChangeConvention = ChangeConvention.LOG) -> AnnualSeries:
    """公式(7)：g_pc(t) = 0.5·Δ(t) + A/G_pc(t)"""
    return predict_growth(cohort, TrendSpec.constant_increment(A), gpc_series, change_convention)


def per_capita(gdp: AnnualSeries, population: AnnualSeries) -> AnnualSeries:
    """总量GDP除以（劳动年龄）人口得到人均GDP"""
    if population.unit != Unit.PERSONS:
        raise UnitMismatchError(f"人口序列单位应为 persons，实际为 {population.unit.value}")
    return gdp / population


class ForecastResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    growth: AnnualSeries
    gpc_path: AnnualSeries
    tcr_path: AnnualSeries


def forecast_growth(cohort: AnnualSeries, anchor: TcrAnchor, gpc_history: AnnualSeries,
                    working_age_growth: Optional[AnnualSeries] = None,
                    change_convention: ChangeConvention = ChangeConvention.LOG) -> ForecastResult:
    """纯预测模式：逐年迭代，T_cr(t) 由预测路径上 t-1 年的人均GDP计算

    人均增长率取 (1+g)/(1+n) - 1，n 为劳动年龄人口增长率，未给出时取 0。
    预测从 gpc_history 的最后一年之后开始，到人口序列可计算变化的最后一年为止。
    """
    _check_gpc(gpc_history)
    if not gpc_history.covers(anchor.anchor_year):
        raise RangeError(f"锚点年 {anchor.anchor_year} 不在人均GDP历史序列内")
    delta = change(cohort, change_convention)
    first = gpc_history.end_year + 1
    if not delta.covers(first):
        raise RangeError(f"人口序列无法覆盖预测起始年 {first}")
    g_anchor = gpc_history.value_at(anchor.anchor_year)

    level = gpc_history.values[-1]
    growth, path, tcrs = [], [], []
    for year in range(first, delta.end_year + 1):
        tcr = anchor.anchor_value * math.sqrt(level / g_anchor)
        g = 0.5 * delta.value_at(year) + trend_term(tcr)
        n = 0.0
        if working_age_growth is not None and working_age_growth.covers(year):
            n = working_age_growth.value_at(year)
        level = level * (1.0 + g) / (1.0 + n)
        if level <= 0:
            raise DomainError(f"{year} 年预测人均GDP非正", year=year)
        growth.append(g)
        path.append(level)
        tcrs.append(tcr)
    logger.info(f"纯预测 {first}-{delta.end_year} 年，共 {len(growth)} 年")
    return ForecastResult(
        growth=AnnualSeries(start_year=first, values=growth, unit=Unit.RATE_PER_YEAR),
        gpc_path=AnnualSeries(start_year=gpc_history.start_year,
                              values=list(gpc_history.values) + path,
                              unit=Unit.DOLLARS_REAL, base=gpc_history.base),
        tcr_path=AnnualSeries(start_year=first, values=tcrs, unit=Unit.YEARS),
    )

"""反演：由观测GDP增长率恢复定义年龄人口序列

d(ln N(t)) = 2·(g(t) - trend(t))，trend 为 1/T_cr(t)（公式3）或 A/G_pc(t)（公式8）。
默认使用指数更新 N(t) = N(t-1)·exp(2·(g - trend))，与对数约定的正向预测严格互逆；
线性更新 N(t-1)·(1 + 2·(g - trend)) 用于复现文中的算术。
"""

import logging
import math
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import DomainError, RangeError, UnitMismatchError
from .model import TrendKind, TrendSpec, trend_series
from .model_utils import band_coverage, golden_section_search, grid_search, rmse
from .series_core import AnnualSeries, Unit, align

logger = logging.getLogger(__name__)

# 人口估计的不确定带
UNCERTAINTY_BAND = 0.05
# N(t0) 搜索分辨率（人），低于人口估计噪声
SEARCH_RESOLUTION = 1000.0


class InversionUpdate(str, Enum):
    EXPONENTIAL = "exponential"
    LINEAR = "linear"


class InversionSetup(BaseModel):
    """反演设定

    参数:
    - initial_year: 初始年份 t0
    - initial_count: N(t0)
    - trend: 趋势设定
    - observed_growth: 观测增长率，取 initial_year 之后的部分
    """

    model_config = ConfigDict(frozen=True)

    initial_year: int
    initial_count: float = Field(gt=0)
    trend: TrendSpec
    observed_growth: AnnualSeries

    @model_validator(mode="after")
    def _check_growth(self):
        if self.observed_growth.unit != Unit.RATE_PER_YEAR:
            raise ValueError(f"观测增长率单位应为 rate_per_year，实际为 {self.observed_growth.unit.value}")
        if self.observed_growth.end_year <= self.initial_year:
            raise ValueError(
                f"观测增长率 ({self.observed_growth.start_year}-{self.observed_growth.end_year}) "
                f"没有初始年 {self.initial_year} 之后的数据"
            )
        return self


def recover_population(setup: InversionSetup, gpc_series: Optional[AnnualSeries] = None,
                       update: InversionUpdate = InversionUpdate.EXPONENTIAL) -> AnnualSeries:
    """公式(3)：由观测增长率与趋势项递推定义年龄人口，N(initial_year) = initial_count

    返回:
    - 从 initial_year 开始的人口序列（persons），取值恒为正
    """
    growth = setup.observed_growth.window(setup.initial_year + 1)
    if growth.start_year != setup.initial_year + 1:
        raise RangeError(
            f"观测增长率从 {growth.start_year} 年开始，与初始年 {setup.initial_year} 之间存在缺口"
        )
    tr = trend_series(setup.trend, gpc_series, growth.year_range)
    if not (tr.covers(growth.start_year) and tr.covers(growth.end_year)):
        raise RangeError(
            f"趋势项 ({tr.start_year}-{tr.end_year}) 无法覆盖增长率年份 {growth.start_year}-{growth.end_year}"
        )
    g, tr = align(growth, tr)
    excess = 2.0 * (g.array - tr.array)

    if InversionUpdate(update) == InversionUpdate.EXPONENTIAL:
        factors = np.exp(excess)
    else:
        factors = 1.0 + excess
        bad = np.flatnonzero(factors <= 0)
        if bad.size:
            year = g.start_year + int(bad[0])
            raise DomainError(f"线性更新在 {year} 年得到非正人口", year=year)

    values = setup.initial_count * np.concatenate(([1.0], np.cumprod(factors)))
    return AnnualSeries(start_year=setup.initial_year, values=values, unit=Unit.PERSONS)


def recover_population_percap(setup: InversionSetup, gpc_series: AnnualSeries,
                              update: InversionUpdate = InversionUpdate.EXPONENTIAL) -> AnnualSeries:
    """公式(8)：d(ln N) = 2·(g_pc - A/G_pc)，observed_growth 为人均GDP增长率"""
    if setup.trend.kind != TrendKind.CONSTANT_INCREMENT:
        raise DomainError("人均反演需要 constant_increment 趋势")
    return recover_population(setup, gpc_series, update)


class InitialCountFit(BaseModel):
    model_config = ConfigDict(frozen=True)

    initial_count: float
    rmse: float
    band_coverage: float
    evaluations: int
    method: str
    window: Tuple[int, int]


def fit_initial_count(candidate_range: Tuple[float, float], target: AnnualSeries,
                      target_window: Tuple[int, int], setup: InversionSetup,
                      gpc_series: Optional[AnnualSeries] = None,
                      update: InversionUpdate = InversionUpdate.EXPONENTIAL,
                      method: str = "golden", resolution: float = SEARCH_RESOLUTION,
                      workers: int = 1) -> InitialCountFit:
    """改变 N(t0) 使恢复序列在目标窗口内与目标人口序列的 RMSE 最小

    恢复序列与 N(t0) 成正比，RMSE 在 ln N(t0) 上单峰，用黄金分割搜索；
    method="grid" 时以 resolution 为步长做网格校验。平局取较小的 N(t0)。
    """
    lo, hi = sorted(candidate_range)
    if lo <= 0 or lo == hi:
        raise DomainError(f"候选区间必须为正且非空: {candidate_range}")
    if not resolution > 0:
        raise DomainError(f"搜索精度必须为正: {resolution}")
    if target.unit != Unit.PERSONS:
        raise UnitMismatchError(f"目标序列单位应为 persons，实际为 {target.unit.value}")

    w_lo, w_hi = sorted(target_window)
    trial = recover_population(setup.model_copy(update={"initial_count": lo}), gpc_series, update)
    start = max(w_lo, trial.start_year, target.start_year)
    end = min(w_hi, trial.end_year, target.end_year)
    if start > end:
        raise RangeError(
            f"恢复序列 ({trial.start_year}-{trial.end_year})、目标序列 "
            f"({target.start_year}-{target.end_year}) 与窗口 {w_lo}-{w_hi} 没有重叠"
        )
    est = target.window(start, end).array

    def recovered_for(n0: float) -> np.ndarray:
        rec = recover_population(setup.model_copy(update={"initial_count": n0}), gpc_series, update)
        return rec.window(start, end).array

    def objective(n0: float) -> float:
        return rmse(est, recovered_for(n0))

    if method == "grid":
        n0, score, calls = grid_search(objective, lo, hi, resolution, workers)
    elif method == "golden":
        x, _, calls = golden_section_search(lambda ln_n: objective(math.exp(ln_n)),
                                            math.log(lo), math.log(hi), tol=resolution / hi)
        n0 = float(min(max(round(math.exp(x)), lo), hi))
        score = objective(n0)
    else:
        raise DomainError(f"未知搜索方法: {method}")

    coverage = band_coverage(est, recovered_for(n0), UNCERTAINTY_BAND)
    logger.info(f"N({setup.initial_year}) 拟合结果 {n0:.0f}，RMSE {score:.1f}，窗口 {start}-{end}")
    return InitialCountFit(initial_count=n0, rmse=score, band_coverage=coverage,
                           evaluations=calls, method=method, window=(start, end))

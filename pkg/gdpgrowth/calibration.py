"""模型参数标定：定义年龄、常数增量 A"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from .errors import DomainError, InsufficientDataError, UnitMismatchError
from .model import TrendSpec, predict_growth
from .model_utils import rmse
from .series_core import AnnualSeries, ChangeConvention, Unit, align

logger = logging.getLogger(__name__)

CANDIDATE_AGES = range(1, 26)
MIN_OVERLAP_YEARS = 5


class AgeSearchResult(BaseModel):
    """定义年龄搜索结果，runner_up_margin 为次优与最优得分之差，单一候选时为空"""

    model_config = ConfigDict(frozen=True)

    per_age_scores: Dict[int, float]
    best_age: int
    runner_up_margin: Optional[float] = None


def _score_age(age: int, cohort: AnnualSeries, observed: AnnualSeries, trend: TrendSpec,
               gpc_series: Optional[AnnualSeries], convention: ChangeConvention) -> Optional[float]:
    predicted = predict_growth(cohort, trend, gpc_series, convention)
    lo = max(predicted.start_year, observed.start_year)
    hi = min(predicted.end_year, observed.end_year)
    if hi - lo + 1 < MIN_OVERLAP_YEARS:
        logger.debug(f"{age} 岁与观测重叠仅 {max(hi - lo + 1, 0)} 年，跳过")
        return None
    obs, pred = align(observed, predicted)
    return rmse(obs.array, pred.array)


def calibrate_defining_age(cohorts: Dict[int, AnnualSeries], observed_growth: AnnualSeries,
                           trend: TrendSpec, gpc_series: Optional[AnnualSeries] = None,
                           window: Optional[Tuple[int, int]] = None,
                           change_convention: ChangeConvention = ChangeConvention.LOG,
                           workers: int = 1) -> AgeSearchResult:
    """逐个候选年龄代入公式(1)，按窗口内 RMSE 选取定义年龄

    参数:
    - cohorts: 年龄 -> 该年龄人口序列
    - observed_growth: 观测实际GDP增长率
    - trend: 趋势设定
    - gpc_series: 人均实际GDP序列
    - window: 评分年份区间，缺省为全部重叠年份
    - workers: 并行评分线程数，结果与求值顺序无关

    返回:
    - AgeSearchResult，得分相同时取较小年龄
    """
    observed = observed_growth
    if window is not None:
        observed = observed_growth.window(*sorted(window))

    ages = []
    for age in sorted(cohorts):
        if age not in CANDIDATE_AGES:
            logger.warning(f"候选年龄 {age} 超出 {CANDIDATE_AGES.start}-{CANDIDATE_AGES.stop - 1}，忽略")
            continue
        ages.append(age)

    def score(age):
        return _score_age(age, cohorts[age], observed, trend, gpc_series, change_convention)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(score, ages))
    else:
        results = [score(age) for age in ages]

    scores = {age: s for age, s in zip(ages, results) if s is not None}
    if not scores:
        raise InsufficientDataError(f"没有与观测重叠不少于 {MIN_OVERLAP_YEARS} 年的候选年龄")

    best = None
    for age in sorted(scores):
        if best is None or scores[age] < scores[best]:
            best = age
    others = sorted(s for age, s in scores.items() if age != best)
    margin = others[0] - scores[best] if others else None
    logger.info(f"定义年龄标定结果: {best} 岁，RMSE {scores[best]:.5f}")
    return AgeSearchResult(per_age_scores=scores, best_age=best, runner_up_margin=margin)


def _check_dollars(gpc: AnnualSeries) -> None:
    if gpc.unit != Unit.DOLLARS_REAL:
        raise UnitMismatchError(f"人均GDP序列单位应为 dollars_real，实际为 {gpc.unit.value}")


def mean_increment(gpc: AnnualSeries) -> float:
    """公式(4)/(5)：人均GDP年均绝对增量 (G(end) - G(start)) / 年数"""
    _check_dollars(gpc)
    if len(gpc) < 2:
        raise DomainError("计算年均增量至少需要两个点")
    return (gpc.values[-1] - gpc.values[0]) / (len(gpc) - 1)


def _aligned_positive(observed_growth: AnnualSeries, gpc: AnnualSeries):
    _check_dollars(gpc)
    g, level = align(observed_growth, gpc)
    arr = level.array
    bad = np.flatnonzero(arr <= 0)
    if bad.size:
        year = level.start_year + int(bad[0])
        raise DomainError(f"{year} 年人均GDP非正", year=year)
    return g.array, arr


def fit_trend_preserving(observed_growth: AnnualSeries, gpc: AnnualSeries) -> float:
    """保持总增长量的 A/G 回归：A = Σg / Σ(1/G)，使 Σ A/G = Σ g"""
    g, level = _aligned_positive(observed_growth, gpc)
    A = float(np.sum(g) / np.sum(1.0 / level))
    if A <= 0:
        logger.warning(f"拟合得到的 A={A:.2f} 非正")
    return A


def fit_trend_least_squares(observed_growth: AnnualSeries, gpc: AnnualSeries) -> float:
    """普通最小二乘 A = Σ(g/G) / Σ(1/G²)，仅作对照，不保持总增长量"""
    g, level = _aligned_positive(observed_growth, gpc)
    return float(np.sum(g / level) / np.sum(1.0 / level ** 2))


class IncrementRegression(BaseModel):
    model_config = ConfigDict(frozen=True)

    slope: float
    intercept: float
    mean_increment: float


def increment_regression(gpc: AnnualSeries) -> IncrementRegression:
    """年增量对上一年人均GDP水平的线性回归，斜率接近 0 表示常数增量"""
    _check_dollars(gpc)
    if len(gpc) < 3:
        raise DomainError("增量回归至少需要三个点")
    arr = gpc.array
    increments = np.diff(arr)
    slope, intercept = np.polyfit(arr[:-1], increments, 1)
    return IncrementRegression(slope=float(slope), intercept=float(intercept),
                               mean_increment=mean_increment(gpc))

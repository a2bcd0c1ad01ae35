"""派生分析：增长分解、15岁以上人口修正、相对增长率平均的陷阱"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from .errors import DomainError, UnitMismatchError
from .series_core import AnnualSeries, Unit, align

logger = logging.getLogger(__name__)

# 美元拆分沿用分量比例：增量·分量/总量，量纲上并不严格
DOLLAR_SPLIT_METHOD = "按分量比例拆分年均增量"


class DecompositionReport(BaseModel):
    """总增长拆分为人口分量与经济趋势分量

    population_component + trend_component = total_factor，
    trend_dollars + population_dollars = mean_increment。
    """

    model_config = ConfigDict(frozen=True)

    period: Tuple[int, int]
    total_basis: str
    total_factor: float
    population_component: float
    trend_component: float
    population_share: float
    mean_increment: float
    trend_dollars: float
    population_dollars: float
    dollar_split_method: str = DOLLAR_SPLIT_METHOD

    def as_dict(self) -> Dict[str, object]:
        return self.model_dump()


def decompose(N_start: float, N_end: float, G_start: float, G_end: float, years: int,
              period: Optional[Tuple[int, int]] = None, total_basis: str = "ratio",
              mean_increment: Optional[float] = None) -> DecompositionReport:
    """增长分解

    参数:
    - N_start, N_end: 期初、期末定义年龄人口
    - G_start, G_end: 期初、期末人均GDP
    - years: 期间年数
    - period: 期间起止年份，仅作标注，缺省为 (0, years)
    - total_basis: "ratio" 总增长取 G_end/G_start；"increase" 取 G_end/G_start - 1
    - mean_increment: 年均增量，缺省为 (G_end - G_start)/years；
      可传入由更长人均GDP序列求得的常数增量

    返回:
    - DecompositionReport
    """
    for name, value in (("N_start", N_start), ("N_end", N_end), ("G_start", G_start), ("G_end", G_end)):
        if not value > 0:
            raise DomainError(f"{name} 必须为正: {value}")
    if years < 1:
        raise DomainError(f"年数至少为 1: {years}")
    if total_basis not in ("ratio", "increase"):
        raise DomainError(f"未知的总增长口径: {total_basis}")

    population = 0.5 * (N_end - N_start) / N_start
    total = G_end / G_start
    if total_basis == "increase":
        total -= 1.0
    if total == 0:
        raise DomainError("总增长为零，无法按比例拆分")
    trend = total - population
    increment = (G_end - G_start) / years if mean_increment is None else float(mean_increment)
    trend_dollars = increment * trend / total
    report = DecompositionReport(
        period=period if period is not None else (0, years),
        total_basis=total_basis,
        total_factor=total,
        population_component=population,
        trend_component=trend,
        population_share=population / total,
        mean_increment=increment,
        trend_dollars=trend_dollars,
        population_dollars=increment - trend_dollars,
    )
    logger.info(f"增长分解: 人口分量 {population:.4f}，趋势分量 {trend:.4f}，总量 {total:.4f}")
    return report


def trend_share_growth(observed_growth: AnnualSeries, report: DecompositionReport) -> AnnualSeries:
    """仅与经济趋势相关的增长率：观测增长率乘以 趋势分量/总量"""
    return observed_growth * (report.trend_component / report.total_factor)


def interpolate_ratios(anchors: Dict[int, float], years: Tuple[int, int]) -> AnnualSeries:
    """由稀疏年份的 总人口/15岁以上人口 比值线性插值出年度序列，锚点区间外取端点值"""
    if not anchors:
        raise DomainError("没有比值锚点")
    xs = np.array(sorted(anchors), dtype=float)
    ys = np.array([anchors[int(x)] for x in xs], dtype=float)
    start, end = sorted(years)
    grid = np.arange(start, end + 1, dtype=float)
    if start < xs[0] or end > xs[-1]:
        logger.warning(f"{start}-{end} 年超出比值锚点范围 {int(xs[0])}-{int(xs[-1])}，区间外取端点值")
    return AnnualSeries(start_year=start, values=np.interp(grid, xs, ys), unit=Unit.DIMENSIONLESS)


def percap_correction(gpc_published: AnnualSeries, ratio_total_over_15plus: AnnualSeries) -> AnnualSeries:
    """15岁以上人口修正：corrected(t) = published(t) · ratio(t)"""
    if gpc_published.unit != Unit.DOLLARS_REAL:
        raise UnitMismatchError(f"人均GDP序列单位应为 dollars_real，实际为 {gpc_published.unit.value}")
    if ratio_total_over_15plus.unit != Unit.DIMENSIONLESS:
        raise UnitMismatchError(f"比值序列应为无量纲，实际为 {ratio_total_over_15plus.unit.value}")
    published, ratio = align(gpc_published, ratio_total_over_15plus)
    bad = np.flatnonzero(ratio.array < 1.0)
    if bad.size:
        year = ratio.start_year + int(bad[0])
        raise DomainError(f"{year} 年比值 {ratio.array[bad[0]]} 小于 1，15岁以上人口不能超过总人口", year=year)
    return published * ratio


class CompoundingResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean_rate: float
    amplitude: float
    years: int
    total_factor_oscillating: float
    total_factor_smooth: float
    closed_form: float
    comparison_oscillating: Optional[float] = None
    comparison_smooth: Optional[float] = None


def _oscillating_factor(mean_rate: float, amplitude: float, years: int) -> float:
    if 1 + mean_rate - amplitude <= 0 or 1 + mean_rate + amplitude <= 0:
        raise DomainError(f"增长因子必须为正: 1 + {mean_rate} ± {amplitude}")
    factors = np.where(np.arange(years) % 2 == 0, 1 + mean_rate + amplitude, 1 + mean_rate - amplitude)
    return float(np.prod(factors))


def compounding_demo(mean_rate: float, amplitude: float, years: int,
                     compare_mean: Optional[float] = None,
                     compare_amplitude: Optional[float] = None) -> CompoundingResult:
    """长期平均相对增长率的陷阱

    围绕 mean_rate 以 amplitude 交替振荡的总增长因子，与平滑复利 (1+mean_rate)^years 比较。
    可选给出第二组均值与振幅作对照（例如 0.019 ± 0.01）。
    """
    if years <= 0 or years % 2:
        raise DomainError(f"年数必须为正偶数: {years}")
    oscillating = _oscillating_factor(mean_rate, amplitude, years)
    closed = ((1 + mean_rate) ** 2 - amplitude ** 2) ** (years / 2)
    result = CompoundingResult(
        mean_rate=mean_rate,
        amplitude=amplitude,
        years=years,
        total_factor_oscillating=oscillating,
        total_factor_smooth=(1 + mean_rate) ** years,
        closed_form=closed,
    )
    if compare_mean is not None:
        amp = compare_amplitude or 0.0
        result = result.model_copy(update={
            "comparison_oscillating": _oscillating_factor(compare_mean, amp, years),
            "comparison_smooth": (1 + compare_mean) ** years,
        })
    return result

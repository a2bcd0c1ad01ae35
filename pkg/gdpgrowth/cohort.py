"""单岁年龄队列投影

由普查年份的年龄金字塔沿时间前后平移得到指定年龄的人口序列：
普查后一年的9岁人数取普查年的8岁人数，依此类推。投影不考虑死亡与迁移。
"""

import logging
from typing import Dict, Iterable, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from .errors import DomainError, RangeError
from .series_core import AgePyramid, AnnualSeries, Unit

logger = logging.getLogger(__name__)

# 精确比值与文中近似式相对偏差超过此值时记录告警
RATIO_DISCREPANCY_WARN = 0.01


class CohortProjection(BaseModel):
    """金字塔投影结果

    years_from_census 与 series 逐年对应，表示该年距普查年的年数，距离越大误差越大。
    """

    model_config = ConfigDict(frozen=True)

    source: AgePyramid
    target_age: int
    series: AnnualSeries
    years_from_census: Tuple[int, ...]
    clipped: bool = False


def achievable_years(pyramid: AgePyramid, target_age: int) -> Tuple[int, int]:
    ref = pyramid.reference_year
    return ref - (pyramid.max_age - target_age), ref + target_age


def project_cohort(pyramid: AgePyramid, target_age: int,
                   year_range: Optional[Tuple[int, int]] = None) -> CohortProjection:
    """把年龄金字塔投影为 target_age 岁人口的年度序列

    参数:
    - pyramid: 普查年份的年龄金字塔
    - target_age: 目标年龄
    - year_range: 请求的年份区间（闭区间），缺省为可达的最大区间

    返回:
    - CohortProjection，t 年取值为金字塔中 target_age - (t - 普查年) 岁的人数；
      请求区间只有部分可达时截取可达部分并记录告警
    """
    if target_age not in pyramid.counts:
        raise DomainError(
            f"目标年龄 {target_age} 不在 {pyramid.reference_year} 年金字塔范围 0-{pyramid.max_age} 内"
        )
    lo, hi = achievable_years(pyramid, target_age)
    clipped = False
    if year_range is not None:
        start, end = sorted(year_range)
        if end < lo or start > hi:
            raise RangeError(
                f"{start}-{end} 年无法由 {pyramid.reference_year} 年金字塔投影到 {target_age} 岁 "
                f"(可达 {lo}-{hi})"
            )
        if start < lo or end > hi:
            clipped = True
            logger.warning(
                f"请求区间 {start}-{end} 超出可达范围，已截取为 {max(start, lo)}-{min(end, hi)}"
            )
        lo, hi = max(start, lo), min(end, hi)

    ref = pyramid.reference_year
    values = [pyramid.counts[target_age - (t - ref)] for t in range(lo, hi + 1)]
    series = AnnualSeries(start_year=lo, values=values, unit=Unit.PERSONS)
    return CohortProjection(
        source=pyramid,
        target_age=target_age,
        series=series,
        years_from_census=tuple(abs(t - ref) for t in range(lo, hi + 1)),
        clipped=clipped,
    )


def cohort_series_by_age(pyramid: AgePyramid, ages: Iterable[int],
                         year_range: Optional[Tuple[int, int]] = None) -> Dict[int, AnnualSeries]:
    """同一金字塔对多个目标年龄的投影，供定义年龄标定使用"""
    out = {}
    for age in ages:
        try:
            out[age] = project_cohort(pyramid, age, year_range).series
        except RangeError as e:
            logger.debug(f"跳过 {age} 岁: {e}")
    return out


def shift_cohort(series: AnnualSeries, from_age: int, to_age: int) -> AnnualSeries:
    """把 from_age 岁的序列平移到 to_age 岁，追踪同一出生队列"""
    return series.model_copy(update={"start_year": series.start_year + (to_age - from_age)})


def adjacent_ratio_exact(a_n: float, a_n1: float, p: float, m: float) -> float:
    """相邻队列每年绝对增长 p 人、经过 m 年后的精确比值 (a_n + m·p) / (a_n1 + m·p)"""
    if a_n <= 0 or a_n1 <= 0:
        raise DomainError(f"队列人数必须为正: a(n)={a_n}, a(n+1)={a_n1}")
    num = a_n + m * p
    den = a_n1 + m * p
    if num <= 0 or den <= 0:
        raise DomainError(f"{m} 年后队列人数非正: {num}, {den}")
    return num / den


def adjacent_ratio_printed_approx(r: float, a_n: float, p: float, m: float) -> float:
    """常见的近似式 1 + r·(1 - m·p/a(n))，按原式计算

    当 r 接近 1 时结果接近 2，与比值的含义不符；可信结果以 adjacent_ratio_exact 为准。
    """
    if a_n <= 0:
        raise DomainError(f"a(n) 必须为正: {a_n}")
    return 1.0 + r * (1.0 - m * p / a_n)


# 别名
adjacent_ratio_paper_approx = adjacent_ratio_printed_approx


class RatioComparison(BaseModel):
    initial_ratio: float
    exact: float
    paper_approx: float
    relative_discrepancy: float


def compare_adjacent_ratio(a_n: float, a_n1: float, p: float, m: float) -> RatioComparison:
    """同一输入下比较精确比值与近似式，偏差过大时告警"""
    exact = adjacent_ratio_exact(a_n, a_n1, p, m)
    r = a_n / a_n1
    approx = adjacent_ratio_printed_approx(r, a_n, p, m)
    discrepancy = abs(approx - exact) / exact
    if discrepancy > RATIO_DISCREPANCY_WARN:
        logger.warning(f"近似式与精确比值偏差 {discrepancy:.1%}: 近似 {approx:.6f}, 精确 {exact:.6f}")
    return RatioComparison(initial_ratio=r, exact=exact, paper_approx=approx,
                           relative_discrepancy=discrepancy)

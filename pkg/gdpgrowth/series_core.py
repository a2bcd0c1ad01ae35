"""年度序列与年龄金字塔容器

所有模块共用的数据载体：
- AnnualSeries：按年份连续排列的实数序列，带单位标签（美元、人数、年增长率、无量纲、年）
- AgePyramid：某一参考年份的单岁年龄人口数

差分约定采用后向差分：年份 t 的变化量由 x(t) 与 x(t-1) 计算，归属于年份 t。
"""

import math
from enum import Enum
from typing import Dict, Iterator, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .errors import AlignmentError, DomainError, RangeError, UnitMismatchError


class Unit(str, Enum):
    """序列单位标签"""
    DOLLARS_REAL = "dollars_real"
    PERSONS = "persons"
    RATE_PER_YEAR = "rate_per_year"
    DIMENSIONLESS = "dimensionless"
    YEARS = "years"


class ChangeConvention(str, Enum):
    """相对变化的离散化约定"""
    RELATIVE = "relative"  # (x(t) - x(t-1)) / x(t-1)
    LOG = "log"            # ln x(t) - ln x(t-1)


# 序列相除时的单位规则：(分子, 分母) -> 结果
_DIVISION_UNITS = {
    (Unit.DOLLARS_REAL, Unit.PERSONS): Unit.DOLLARS_REAL,
}

Number = Union[int, float]


class AnnualSeries(BaseModel):
    """按年份连续的实数序列

    参数:
    - start_year: 第一个值对应的日历年
    - values: 连续年份的取值，至少一个，全部为有限实数
    - unit: 单位标签
    - base: 美元序列的基期标签（如 "2002 US dollars"），其他单位可为空
    """

    model_config = ConfigDict(frozen=True)

    start_year: int
    values: Tuple[float, ...]
    unit: Unit
    base: Optional[str] = None

    @field_validator("values", mode="before")
    @classmethod
    def _coerce_values(cls, v):
        arr = np.asarray(v, dtype=float).ravel()
        return tuple(float(x) for x in arr)

    @field_validator("values")
    @classmethod
    def _check_values(cls, v):
        if len(v) == 0:
            raise ValueError("序列至少需要一个取值")
        for x in v:
            if not math.isfinite(x):
                raise ValueError(f"序列包含非有限值: {x}")
        return v

    @model_validator(mode="after")
    def _check_persons(self):
        if self.unit == Unit.PERSONS:
            for i, x in enumerate(self.values):
                if x < 0:
                    raise ValueError(f"人数不能为负: {self.start_year + i} 年为 {x}")
        return self

    # ------------------------------------------------------------------
    # 基本属性
    # ------------------------------------------------------------------
    @property
    def end_year(self) -> int:
        return self.start_year + len(self.values) - 1

    @property
    def year_range(self) -> Tuple[int, int]:
        return (self.start_year, self.end_year)

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.start_year, self.end_year + 1)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Tuple[int, float]]:
        return iter(zip(range(self.start_year, self.end_year + 1), self.values))

    def covers(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year

    def value_at(self, year: int) -> float:
        if not self.covers(year):
            raise RangeError(f"{year} 年不在序列范围 {self.start_year}-{self.end_year} 内")
        return self.values[year - self.start_year]

    def window(self, start: Optional[int] = None, end: Optional[int] = None) -> "AnnualSeries":
        """截取 [start, end] 年份段，缺省端点取序列自身端点"""
        lo = self.start_year if start is None else max(start, self.start_year)
        hi = self.end_year if end is None else min(end, self.end_year)
        if lo > hi:
            raise AlignmentError(self.year_range, (start or lo, end or hi))
        return self.model_copy(update={
            "start_year": lo,
            "values": self.values[lo - self.start_year: hi - self.start_year + 1],
        })

    def with_values(self, values: Sequence[float], start_year: Optional[int] = None,
                    unit: Optional[Unit] = None, base: Optional[str] = None) -> "AnnualSeries":
        """沿用本序列的元数据构造新序列"""
        new_unit = self.unit if unit is None else unit
        new_base = base if base is not None else (self.base if new_unit == self.unit else None)
        return AnnualSeries(
            start_year=self.start_year if start_year is None else start_year,
            values=values,
            unit=new_unit,
            base=new_base,
        )

    def to_pandas(self) -> pd.Series:
        return pd.Series(self.array, index=pd.Index(self.years, name="year"), name=self.unit.value)

    @classmethod
    def from_pandas(cls, series: pd.Series, unit: Unit, base: Optional[str] = None) -> "AnnualSeries":
        years = [int(y) for y in series.index]
        if years != list(range(years[0], years[0] + len(years))):
            raise RangeError(f"年份不连续: {years[0]}-{years[-1]}")
        return cls(start_year=years[0], values=series.to_numpy(dtype=float), unit=unit, base=base)

    # ------------------------------------------------------------------
    # 带单位检查的算术运算，结果覆盖两序列年份交集
    # ------------------------------------------------------------------
    def _check_base(self, other: "AnnualSeries") -> Optional[str]:
        if self.base and other.base and self.base != other.base:
            raise UnitMismatchError(f"美元基期不一致: '{self.base}' 与 '{other.base}'")
        return self.base or other.base

    def _binary(self, other: "AnnualSeries", op, unit: Unit, base: Optional[str]) -> "AnnualSeries":
        a, b = align(self, other)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = op(a.array, b.array)
        bad = np.flatnonzero(~np.isfinite(out))
        if bad.size:
            year = a.start_year + int(bad[0])
            raise DomainError(f"{year} 年运算结果非有限值", year=year)
        return AnnualSeries(start_year=a.start_year, values=out, unit=unit, base=base)

    def __add__(self, other: "AnnualSeries") -> "AnnualSeries":
        if not isinstance(other, AnnualSeries):
            return NotImplemented
        if self.unit != other.unit:
            raise UnitMismatchError(f"单位不一致，不能相加: {self.unit.value} + {other.unit.value}")
        return self._binary(other, np.add, self.unit, self._check_base(other))

    def __sub__(self, other: "AnnualSeries") -> "AnnualSeries":
        if not isinstance(other, AnnualSeries):
            return NotImplemented
        if self.unit != other.unit:
            raise UnitMismatchError(f"单位不一致，不能相减: {self.unit.value} - {other.unit.value}")
        return self._binary(other, np.subtract, self.unit, self._check_base(other))

    def __mul__(self, other: Union["AnnualSeries", Number]) -> "AnnualSeries":
        if isinstance(other, (int, float)):
            return self.with_values(self.array * float(other))
        if not isinstance(other, AnnualSeries):
            return NotImplemented
        if other.unit == Unit.DIMENSIONLESS:
            unit, base = self.unit, self.base
        elif self.unit == Unit.DIMENSIONLESS:
            unit, base = other.unit, other.base
        else:
            raise UnitMismatchError(f"单位不一致，不能相乘: {self.unit.value} * {other.unit.value}")
        return self._binary(other, np.multiply, unit, base)

    __rmul__ = __mul__

    def __truediv__(self, other: Union["AnnualSeries", Number]) -> "AnnualSeries":
        if isinstance(other, (int, float)):
            if other == 0:
                raise DomainError("除数为零")
            return self.with_values(self.array / float(other))
        if not isinstance(other, AnnualSeries):
            return NotImplemented
        if self.unit == other.unit:
            if self.unit == Unit.DOLLARS_REAL:
                self._check_base(other)
            unit, base = Unit.DIMENSIONLESS, None
        elif other.unit == Unit.DIMENSIONLESS:
            unit, base = self.unit, self.base
        elif (self.unit, other.unit) in _DIVISION_UNITS:
            unit, base = _DIVISION_UNITS[(self.unit, other.unit)], self.base
        else:
            raise UnitMismatchError(f"单位不一致，不能相除: {self.unit.value} / {other.unit.value}")
        return self._binary(other, np.divide, unit, base)


class AgePyramid(BaseModel):
    """参考年份的单岁年龄人口数，年龄从0开始连续"""

    model_config = ConfigDict(frozen=True)

    reference_year: int
    counts: Dict[int, float]

    @field_validator("counts")
    @classmethod
    def _check_counts(cls, v):
        if not v:
            raise ValueError("年龄金字塔为空")
        ages = sorted(v)
        if ages != list(range(len(ages))):
            missing = sorted(set(range(ages[-1] + 1)) - set(ages))
            raise ValueError(f"年龄必须从0开始连续，缺少: {missing[:5]}")
        for age, count in v.items():
            if not math.isfinite(count) or count < 0:
                raise ValueError(f"{age} 岁人数非法: {count}")
        return {age: float(v[age]) for age in ages}

    @property
    def max_age(self) -> int:
        return len(self.counts) - 1

    def count_at(self, age: int) -> float:
        if age not in self.counts:
            raise DomainError(f"{self.reference_year} 年金字塔中没有 {age} 岁人口 (0-{self.max_age})")
        return self.counts[age]


# ----------------------------------------------------------------------
# 差分与对齐
# ----------------------------------------------------------------------
def _check_positive(series: AnnualSeries) -> np.ndarray:
    if len(series) < 2:
        raise DomainError(f"计算变化率至少需要两个点，当前 {len(series)} 个")
    arr = series.array
    bad = np.flatnonzero(arr <= 0)
    if bad.size:
        year = series.start_year + int(bad[0])
        raise DomainError(f"{year} 年取值非正 ({arr[bad[0]]})，无法计算变化率", year=year)
    return arr


def relative_change(series: AnnualSeries) -> AnnualSeries:
    """相对变化 (x(t) - x(t-1)) / x(t-1)，结果从 start_year+1 开始"""
    arr = _check_positive(series)
    return AnnualSeries(
        start_year=series.start_year + 1,
        values=np.diff(arr) / arr[:-1],
        unit=Unit.RATE_PER_YEAR,
    )


def log_change(series: AnnualSeries) -> AnnualSeries:
    """对数差分 ln x(t) - ln x(t-1)"""
    arr = _check_positive(series)
    return AnnualSeries(
        start_year=series.start_year + 1,
        values=np.diff(np.log(arr)),
        unit=Unit.RATE_PER_YEAR,
    )


def change(series: AnnualSeries, convention: ChangeConvention) -> AnnualSeries:
    if ChangeConvention(convention) == ChangeConvention.LOG:
        return log_change(series)
    return relative_change(series)


def accumulate(rates: AnnualSeries, start_value: float, unit: Unit,
               convention: ChangeConvention = ChangeConvention.RELATIVE,
               base: Optional[str] = None) -> AnnualSeries:
    """由变化率序列从起始值重新复利累积，结果从 rates.start_year-1 开始"""
    if start_value <= 0:
        raise DomainError(f"起始值必须为正: {start_value}")
    r = rates.array
    if ChangeConvention(convention) == ChangeConvention.LOG:
        factors = np.exp(r)
    else:
        factors = 1.0 + r
    path = start_value * np.concatenate(([1.0], np.cumprod(factors)))
    return AnnualSeries(start_year=rates.start_year - 1, values=path, unit=unit, base=base)


def align(a: AnnualSeries, b: AnnualSeries) -> Tuple[AnnualSeries, AnnualSeries]:
    """把两个序列截取到年份交集"""
    lo = max(a.start_year, b.start_year)
    hi = min(a.end_year, b.end_year)
    if lo > hi:
        raise AlignmentError(a.year_range, b.year_range)
    return a.window(lo, hi), b.window(lo, hi)

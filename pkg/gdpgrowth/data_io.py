"""文件读写

序列文件：首行为表头，列名与 key=value 元数据以逗号分隔，例如
    year,value,unit=dollars_real,base=2002 US dollars
    1950,12123
金字塔文件：
    age,count,year=1990,unit=persons
    0,4070250
国家配置：每行一个 KEY=VALUE，用 python-dotenv 解析。
模型结果：year,observed,predicted,residual 四列，6位有效数字，输出文件可带一行 "# " 开头的配置回显（key=value 以分号分隔），读取时跳过。
"""

import logging
import math
import os
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import pandas as pd
from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .analysis import DecompositionReport
from .errors import ConfigError, DataFormatError
from .inversion import InversionUpdate
from .model import ModelRun, TcrAnchor, TrendSpec
from .series_core import AgePyramid, AnnualSeries, ChangeConvention, Unit

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

RUN_COLUMNS = ["year", "observed", "predicted", "residual"]
RUN_FLOAT_FORMAT = "%.6g"
SERIES_FLOAT_FORMAT = "%.15g"

# 配置中的文件绑定键
FILE_KEYS = {
    "GDP_GROWTH_FILE": "gdp_growth",
    "GDP_FILE": "gdp",
    "GDP_PERCAP_FILE": "gdp_percap",
    "POPULATION_FILE": "population",
    "WORKING_AGE_FILE": "working_age",
    "COHORT_FILE": "cohort",
}
KNOWN_KEYS = set(FILE_KEYS) | {
    "COUNTRY_CODE", "DEFINING_AGE", "TCR_ANCHOR_YEAR", "TCR_ANCHOR_VALUE", "TREND_A",
    "CORRECTION_RATIOS", "DOLLAR_BASE", "CHANGE_CONVENTION", "INVERSION_UPDATE", "PYRAMID_FILES",
    "CALIBRATION_WINDOW",
}

# 年份与年龄的合理取值范围
YEAR_BOUNDS = (1000, 2999)
AGE_BOUNDS = (0, 150)
KEY_BOUNDS = {"year": YEAR_BOUNDS, "age": AGE_BOUNDS}


# ----------------------------------------------------------------------
# 表头与数据行
# ----------------------------------------------------------------------
def _read_header(path: Path) -> Tuple[List[str], Dict[str, str], int]:
    """返回 (列名, 元数据, 表头行号)，跳过开头 "#" 注释行"""
    if not path.is_file():
        raise DataFormatError("文件不存在", path=str(path))
    header_line = 0
    try:
        with path.open("r", encoding="utf-8") as f:
            for first in f:
                header_line += 1
                if not first.startswith("#"):
                    break
            else:
                first = ""
    except (OSError, UnicodeDecodeError) as e:
        raise DataFormatError(f"无法读取文件: {e}", path=str(path)) from e
    if not first.strip():
        raise DataFormatError("缺少表头", path=str(path), line=max(header_line, 1))
    columns, meta = [], {}
    for field in first.strip().split(","):
        field = field.strip()
        if "=" in field:
            key, value = field.split("=", 1)
            meta[key.strip()] = value.strip()
        elif field:
            columns.append(field)
    return columns, meta, header_line


def _read_rows(path: Path, columns: List[str], header_line: int) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, skiprows=header_line, header=None, index_col=False, dtype=str,
                            skip_blank_lines=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        return pd.DataFrame(columns=columns)
    except (pd.errors.ParserError, UnicodeDecodeError, ValueError) as e:
        raise DataFormatError(f"CSV 解析失败: {e}", path=str(path)) from e
    frame.index = frame.index + header_line + 1
    frame = frame.dropna(how="all")
    if frame.shape[1] > len(columns):
        extra = frame.iloc[:, len(columns):].notna().any(axis=1)
        line = int(extra.idxmax())
        raise DataFormatError(f"字段数多于 {len(columns)} 个", path=str(path), line=line)
    frame = frame.reindex(columns=range(len(columns)))
    frame.columns = columns
    return frame


def _parse_int(raw, path: Path, line: int, what: str,
               bounds: Optional[Tuple[int, int]] = None) -> int:
    if pd.isna(raw):
        raise DataFormatError(f"缺少 {what}", path=str(path), line=line)
    try:
        value = float(str(raw).strip())
    except (TypeError, ValueError):
        raise DataFormatError(f"{what} 不是数字: '{raw}'", path=str(path), line=line)
    if not math.isfinite(value) or value != int(value):
        raise DataFormatError(f"{what} 不是整数: '{raw}'", path=str(path), line=line)
    if bounds is not None and not bounds[0] <= value <= bounds[1]:
        raise DataFormatError(f"{what} 超出范围 {bounds[0]}-{bounds[1]}: '{raw}'", path=str(path), line=line)
    return int(value)


def _parse_float(raw, path: Path, line: int, what: str) -> float:
    if pd.isna(raw):
        raise DataFormatError(f"缺少 {what}", path=str(path), line=line)
    try:
        value = float(str(raw).strip())
    except (TypeError, ValueError):
        raise DataFormatError(f"{what} 不是数字: '{raw}'", path=str(path), line=line)
    if not math.isfinite(value):
        raise DataFormatError(f"{what} 不是有限值: '{raw}'", path=str(path), line=line)
    return value


def _keyed_values(path: Path, key: str, value: str, nonnegative: bool) -> Tuple[List[int], List[float], List[int]]:
    """读取 (键, 值) 两列，键必须严格递增且连续"""
    columns, _, header_line = _read_header(path)
    if columns[:2] != [key, value]:
        raise DataFormatError(f"表头列名应为 {key},{value}，实际为 {','.join(columns)}",
                              path=str(path), line=header_line)
    frame = _read_rows(path, [key, value], header_line)
    keys, values, lines = [], [], []
    for line, row in frame.iterrows():
        k = _parse_int(row[key], path, line, key, KEY_BOUNDS.get(key))
        v = _parse_float(row[value], path, line, value)
        if nonnegative and v < 0:
            raise DataFormatError(f"{value} 不能为负: {v}", path=str(path), line=line)
        if keys:
            if k == keys[-1]:
                raise DataFormatError(f"{key} 重复: {k}", path=str(path), line=line)
            if k < keys[-1]:
                raise DataFormatError(f"{key} 未按升序排列: {k}", path=str(path), line=line)
            if k != keys[-1] + 1:
                raise DataFormatError(f"{key} 不连续，缺少 {keys[-1] + 1}", path=str(path), line=line)
        keys.append(k)
        values.append(v)
        lines.append(line)
    if not keys:
        raise DataFormatError("没有数据行", path=str(path))
    return keys, values, lines


# ----------------------------------------------------------------------
# 序列
# ----------------------------------------------------------------------
def read_series(path: PathLike, expected_unit: Optional[Unit] = None,
                expected_base: Optional[str] = None) -> AnnualSeries:
    """读取年度序列文件

    参数:
    - path: 文件路径
    - expected_unit: 期望单位，与表头不一致时报格式错误
    - expected_base: 期望的美元基期，与表头不一致时报格式错误
    """
    path = Path(path)
    _, meta, header_line = _read_header(path)
    if "unit" not in meta:
        raise DataFormatError("表头缺少 unit=...", path=str(path), line=header_line)
    try:
        unit = Unit(meta["unit"])
    except ValueError:
        raise DataFormatError(f"未知单位: {meta['unit']}", path=str(path), line=header_line)
    if expected_unit is not None and unit != Unit(expected_unit):
        raise DataFormatError(f"单位不一致: 文件为 {unit.value}，期望 {Unit(expected_unit).value}",
                              path=str(path), line=header_line)
    base = meta.get("base")
    if expected_base and base and base != expected_base:
        raise DataFormatError(f"美元基期不一致: 文件为 '{base}'，期望 '{expected_base}'",
                              path=str(path), line=header_line)

    years, values, _ = _keyed_values(path, "year", "value", nonnegative=unit == Unit.PERSONS)
    try:
        series = AnnualSeries(start_year=years[0], values=values, unit=unit, base=base)
    except ValidationError as e:
        raise DataFormatError(f"序列非法: {e.errors()[0]['msg']}", path=str(path)) from e
    logger.debug(f"读取序列 {path.name}: {series.start_year}-{series.end_year}, {unit.value}")
    return series


def write_series(series: AnnualSeries, path: PathLike, metadata: Optional[Dict[str, object]] = None) -> None:
    header = f"year,value,unit={series.unit.value}"
    if series.base:
        header += f",base={series.base}"
    frame = pd.DataFrame({"year": series.years, "value": series.array})
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(_metadata_line(metadata))
        f.write(header + "\n")
        frame.to_csv(f, header=False, index=False, float_format=SERIES_FLOAT_FORMAT, lineterminator="\n")


# ----------------------------------------------------------------------
# 年龄金字塔
# ----------------------------------------------------------------------
def read_pyramid(path: PathLike) -> AgePyramid:
    """读取单岁年龄金字塔，表头给出参考年份 year=YYYY"""
    path = Path(path)
    _, meta, header_line = _read_header(path)
    if "year" not in meta:
        raise DataFormatError("表头缺少 year=...", path=str(path), line=header_line)
    reference_year = _parse_int(meta["year"], path, header_line, "参考年份", YEAR_BOUNDS)
    if meta.get("unit", Unit.PERSONS.value) != Unit.PERSONS.value:
        raise DataFormatError(f"金字塔单位必须为 persons: {meta['unit']}", path=str(path), line=header_line)
    ages, counts, _ = _keyed_values(path, "age", "count", nonnegative=True)
    if ages[0] != 0:
        raise DataFormatError(f"年龄必须从 0 开始，实际从 {ages[0]} 开始", path=str(path), line=header_line + 1)
    return AgePyramid(reference_year=reference_year, counts=dict(zip(ages, counts)))


def write_pyramid(pyramid: AgePyramid, path: PathLike, metadata: Optional[Dict[str, object]] = None) -> None:
    frame = pd.DataFrame({"age": list(pyramid.counts), "count": list(pyramid.counts.values())})
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(_metadata_line(metadata))
        f.write(f"age,count,year={pyramid.reference_year},unit={Unit.PERSONS.value}\n")
        frame.to_csv(f, header=False, index=False, float_format=SERIES_FLOAT_FORMAT, lineterminator="\n")


# ----------------------------------------------------------------------
# 模型结果与报告
# ----------------------------------------------------------------------
def _metadata_line(metadata: Optional[Dict[str, object]]) -> str:
    if not metadata:
        return ""
    pairs = [f"{k}={str(v).replace(chr(10), ' ')}" for k, v in sorted(metadata.items())]
    return "# " + ";".join(pairs) + "\n"


def write_run(run: ModelRun, path: PathLike, metadata: Optional[Dict[str, object]] = None) -> None:
    """写出 year,observed,predicted,residual 四列，相同输入得到逐字节相同的文件"""
    frame = pd.DataFrame(run.rows(), columns=RUN_COLUMNS)
    frame["year"] = frame["year"].astype(int)
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(_metadata_line(metadata))
            frame.to_csv(f, index=False, float_format=RUN_FLOAT_FORMAT, na_rep="", lineterminator="\n")
    except OSError as e:
        logger.error(f"写出结果文件失败: {e}")
        raise


def read_run(path: PathLike) -> Tuple[Dict[str, str], pd.DataFrame]:
    """读取 write_run 的输出，返回 (配置回显, 数据表)"""
    path = Path(path)
    if not path.is_file():
        raise DataFormatError("文件不存在", path=str(path))
    metadata: Dict[str, str] = {}
    with path.open("r", encoding="utf-8") as f:
        first = f.readline()
    skip = 0
    if first.startswith("# "):
        skip = 1
        for pair in first[2:].strip().split(";"):
            if "=" in pair:
                key, value = pair.split("=", 1)
                metadata[key] = value
    try:
        frame = pd.read_csv(path, skiprows=skip)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataFormatError(f"结果文件解析失败: {e}", path=str(path)) from e
    if list(frame.columns) != RUN_COLUMNS:
        raise DataFormatError(f"结果文件列名应为 {','.join(RUN_COLUMNS)}", path=str(path))
    return metadata, frame


def format_report(report: DecompositionReport) -> str:
    """扁平 key=value 文本块"""
    lines = []
    for key, value in report.as_dict().items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        elif isinstance(value, tuple):
            value = "-".join(str(v) for v in value)
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def write_report(report: DecompositionReport, path: PathLike,
                 metadata: Optional[Dict[str, object]] = None) -> None:
    """写出分解报告，.csv 后缀为单行 CSV，其余为 key=value 文本"""
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(_metadata_line(metadata))
        if str(path).endswith(".csv"):
            data = report.as_dict()
            data["period"] = "-".join(str(v) for v in report.period)
            pd.DataFrame([data]).to_csv(f, index=False, float_format=RUN_FLOAT_FORMAT, lineterminator="\n")
        else:
            f.write(format_report(report))


def convert_table(source: PathLike, year_column: str, value_column: str, unit: Unit,
                  out_path: PathLike, base: Optional[str] = None, scale: float = 1.0) -> AnnualSeries:
    """把外部表格（手工导出的 BEA / Census CSV）转换为本项目的序列格式

    参数:
    - source: 原始 CSV，至少包含年份列与取值列
    - year_column, value_column: 列名
    - unit, base: 目标单位与美元基期
    - scale: 取值缩放（例如千人 -> 人 取 1000）
    """
    try:
        frame = pd.read_csv(source, usecols=[year_column, value_column], thousands=",")
    except (OSError, ValueError, pd.errors.ParserError) as e:
        raise DataFormatError(f"无法读取外部表格: {e}", path=str(source)) from e
    frame = frame.dropna().sort_values(year_column)
    frame[year_column] = frame[year_column].astype(int)
    values = pd.Series(frame[value_column].astype(float).to_numpy() * scale,
                       index=frame[year_column].to_numpy())
    series = AnnualSeries.from_pandas(values, unit=unit, base=base)
    write_series(series, out_path)
    return series


# ----------------------------------------------------------------------
# 国家配置
# ----------------------------------------------------------------------
class CountryConfig(BaseModel):
    """国家配置

    tcr_anchor 与 trend_A 至少给出一个；文件路径已按配置文件所在目录解析。
    """

    model_config = ConfigDict(frozen=True)

    country_code: str
    defining_age: int = Field(ge=1, le=25)
    tcr_anchor: Optional[TcrAnchor] = None
    trend_A: Optional[float] = None
    correction_ratios: Dict[int, float] = {}
    dollar_base: Optional[str] = None
    change_convention: ChangeConvention = ChangeConvention.LOG
    inversion_update: InversionUpdate = InversionUpdate.EXPONENTIAL
    calibration_window: Optional[Tuple[int, int]] = None
    files: Dict[str, Path] = {}
    pyramids: Dict[int, Path] = {}
    raw: Dict[str, str] = {}

    @model_validator(mode="after")
    def _check_trend(self):
        if self.tcr_anchor is None and self.trend_A is None:
            raise ValueError("TCR_ANCHOR_* 与 TREND_A 至少需要给出一个")
        return self

    def trend(self, percap: bool = False) -> TrendSpec:
        if percap:
            if self.trend_A is None:
                raise ConfigError(f"{self.country_code}: 人均模型需要 TREND_A")
            return TrendSpec.constant_increment(self.trend_A)
        if self.tcr_anchor is None:
            raise ConfigError(f"{self.country_code}: 总量模型需要 TCR_ANCHOR_YEAR / TCR_ANCHOR_VALUE")
        return TrendSpec.reciprocal(self.tcr_anchor.anchor_year, self.tcr_anchor.anchor_value)

    def file(self, name: str) -> Path:
        if name not in self.files:
            key = {v: k for k, v in FILE_KEYS.items()}.get(name, name)
            raise ConfigError(f"{self.country_code}: 配置缺少文件绑定 {key}")
        return self.files[name]

    def pyramid_file(self, year: int) -> Path:
        if year not in self.pyramids:
            raise ConfigError(f"{self.country_code}: 没有 {year} 年的年龄金字塔，可选 {sorted(self.pyramids)}")
        return self.pyramids[year]


def _parse_pairs(text: str, key: str) -> Dict[int, str]:
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" not in item:
            raise ConfigError(f"{key} 的条目应为 年份:取值，实际为 '{item}'")
        year, value = item.split(":", 1)
        try:
            out[int(year)] = value.strip()
        except ValueError:
            raise ConfigError(f"{key} 的年份非法: '{year}'")
    return out


def _number(values: Dict[str, str], key: str, cast=float):
    raw = values.get(key)
    if raw is None or raw == "":
        return None
    try:
        value = cast(raw)
    except ValueError:
        raise ConfigError(f"{key} 取值非法: '{raw}'")
    if not math.isfinite(value):
        raise ConfigError(f"{key} 不是有限值: '{raw}'")
    return value


def _parse_window(text: str, key: str) -> Optional[Tuple[int, int]]:
    """"1951-2004" 形式的年份区间"""
    text = (text or "").strip()
    if not text:
        return None
    try:
        start, end = (int(x) for x in text.split("-", 1))
    except ValueError:
        raise ConfigError(f"{key} 应为 起始年-结束年，实际为 '{text}'")
    if start >= end:
        raise ConfigError(f"{key} 起始年必须早于结束年: '{text}'")
    return start, end


def read_config(path: PathLike, overrides: Optional[Dict[str, str]] = None) -> CountryConfig:
    """读取国家配置文件，overrides 中的键覆盖文件中的同名键"""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"配置文件不存在: {path}")
    values = {k: (v or "") for k, v in dotenv_values(path).items()}
    values.update({k.upper(): v for k, v in (overrides or {}).items()})
    for key in sorted(set(values) - KNOWN_KEYS):
        logger.warning(f"忽略未知配置项: {key}")
    base_dir = path.parent

    def resolve(p: str) -> Path:
        p = Path(os.path.expanduser(p.strip()))
        return p if p.is_absolute() else base_dir / p

    for key in ("COUNTRY_CODE", "DEFINING_AGE"):
        if not values.get(key):
            raise ConfigError(f"配置缺少 {key}")

    anchor = None
    anchor_year = _number(values, "TCR_ANCHOR_YEAR", int)
    anchor_value = _number(values, "TCR_ANCHOR_VALUE")
    if (anchor_year is None) != (anchor_value is None):
        raise ConfigError("TCR_ANCHOR_YEAR 与 TCR_ANCHOR_VALUE 必须同时给出")

    ratios = {}
    for year, raw in _parse_pairs(values.get("CORRECTION_RATIOS", ""), "CORRECTION_RATIOS").items():
        try:
            ratios[year] = float(raw)
        except ValueError:
            raise ConfigError(f"CORRECTION_RATIOS 中 {year} 年比值非法: '{raw}'")

    try:
        if anchor_year is not None:
            anchor = TcrAnchor(anchor_year=anchor_year, anchor_value=anchor_value)
        return CountryConfig(
            country_code=values["COUNTRY_CODE"],
            defining_age=_number(values, "DEFINING_AGE", int),
            tcr_anchor=anchor,
            trend_A=_number(values, "TREND_A"),
            correction_ratios=ratios,
            dollar_base=values.get("DOLLAR_BASE") or None,
            change_convention=values.get("CHANGE_CONVENTION") or ChangeConvention.LOG,
            inversion_update=values.get("INVERSION_UPDATE") or InversionUpdate.EXPONENTIAL,
            calibration_window=_parse_window(values.get("CALIBRATION_WINDOW", ""), "CALIBRATION_WINDOW"),
            files={name: resolve(values[key]) for key, name in FILE_KEYS.items() if values.get(key)},
            pyramids={year: resolve(p) for year, p in
                      _parse_pairs(values.get("PYRAMID_FILES", ""), "PYRAMID_FILES").items()},
            raw=dict(sorted(values.items())),
        )
    except ValidationError as e:
        err = e.errors()[0]
        loc = ".".join(str(x) for x in err["loc"])
        raise ConfigError(f"配置非法 {loc}: {err['msg']}" if loc else f"配置非法: {err['msg']}") from e
    except ValueError as e:
        raise ConfigError(f"配置非法: {e}") from e


def write_table(frame: pd.DataFrame, path: PathLike, metadata: Optional[Dict[str, object]] = None) -> None:
    """通用表格输出，格式与 write_run 一致"""
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(_metadata_line(metadata))
        frame.to_csv(f, index=False, float_format=RUN_FLOAT_FORMAT, na_rep="", lineterminator="\n")

"""各子命令共用的数据装载"""

import logging
from typing import Dict, Optional

from gdpgrowth import (
    AnnualSeries,
    ConfigError,
    CountryConfig,
    Unit,
    change,
    interpolate_ratios,
    percap_correction,
    project_cohort,
    read_pyramid,
    read_series,
)
from gdpgrowth.series_core import AgePyramid

logger = logging.getLogger(__name__)


def require_config(config: Optional[CountryConfig], command: str) -> CountryConfig:
    if config is None:
        raise ConfigError(f"{command} 需要 --config 指定国家配置文件")
    return config


def echo_metadata(config: Optional[CountryConfig], command: str) -> Dict[str, object]:
    """输出文件首行回显的有效配置"""
    metadata: Dict[str, object] = {"command": command}
    if config is not None:
        metadata.update(config.raw)
    return metadata


def load_growth(config: CountryConfig) -> AnnualSeries:
    return read_series(config.file("gdp_growth"), Unit.RATE_PER_YEAR)


def load_gpc(config: CountryConfig, corrected: bool = False) -> AnnualSeries:
    """人均实际GDP，corrected 时按 CORRECTION_RATIOS 做15岁以上人口修正"""
    gpc = read_series(config.file("gdp_percap"), Unit.DOLLARS_REAL, config.dollar_base)
    if not corrected:
        return gpc
    if not config.correction_ratios:
        raise ConfigError(f"{config.country_code}: 修正需要 CORRECTION_RATIOS")
    ratios = interpolate_ratios(config.correction_ratios, gpc.year_range)
    logger.info(f"人均GDP按15岁以上人口修正，比值锚点 {config.correction_ratios}")
    return percap_correction(gpc, ratios)


def load_pyramid(config: CountryConfig, year: int) -> AgePyramid:
    return read_pyramid(config.pyramid_file(year))


def load_cohort(config: CountryConfig, pyramid_year: Optional[int] = None,
                age: Optional[int] = None) -> AnnualSeries:
    """定义年龄人口序列：金字塔投影优先，否则读取 COHORT_FILE"""
    age = config.defining_age if age is None else age
    if pyramid_year is not None:
        return project_cohort(load_pyramid(config, pyramid_year), age).series
    if "cohort" in config.files:
        return read_series(config.file("cohort"), Unit.PERSONS)
    raise ConfigError(f"{config.country_code}: 需要 --pyramid 或配置 COHORT_FILE")


def percap_growth(config: CountryConfig, gpc: AnnualSeries) -> AnnualSeries:
    """人均实际GDP的观测增长率，按配置的差分约定计算"""
    return change(gpc, config.change_convention)


def clip(series: AnnualSeries, start: Optional[int], end: Optional[int]) -> AnnualSeries:
    if start is None and end is None:
        return series
    return series.window(start, end)

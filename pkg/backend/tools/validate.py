"""数据检查子命令"""

import logging
from typing import Any, Dict

import pandas as pd

from gdpgrowth import RangeError, Unit, read_pyramid, read_series, write_table

from .inputs import echo_metadata, require_config

logger = logging.getLogger(__name__)

# 文件绑定 -> 期望单位
EXPECTED_UNITS = {
    "gdp_growth": Unit.RATE_PER_YEAR,
    "gdp": Unit.DOLLARS_REAL,
    "gdp_percap": Unit.DOLLARS_REAL,
    "population": Unit.PERSONS,
    "working_age": Unit.PERSONS,
    "cohort": Unit.PERSONS,
}


def validate(args, config) -> Dict[str, Any]:
    """读取配置绑定的全部文件，任何格式错误都会以 DataFormatError 报出"""
    config = require_config(config, args.command)
    rows = []
    summary: Dict[str, Any] = {"country": config.country_code}
    series = {}
    for name in sorted(config.files):
        unit = EXPECTED_UNITS[name]
        base = config.dollar_base if unit == Unit.DOLLARS_REAL else None
        s = read_series(config.files[name], unit, base)
        series[name] = s
        summary[name] = f"{s.start_year}-{s.end_year}"
        rows.append((name, unit.value, s.start_year, s.end_year, len(s)))
        logger.info(f"{name}: {s.start_year}-{s.end_year}，{len(s)} 个点")
    for year in sorted(config.pyramids):
        pyramid = read_pyramid(config.pyramids[year])
        if pyramid.reference_year != year:
            logger.warning(f"PYRAMID_FILES 中 {year} 年对应文件的参考年份为 {pyramid.reference_year}")
        summary[f"pyramid_{year}"] = f"0-{pyramid.max_age}"
        rows.append((f"pyramid_{year}", Unit.PERSONS.value, 0, pyramid.max_age, len(pyramid.counts)))

    gpc = series.get("gdp_percap")
    if gpc is not None and config.tcr_anchor is not None and not gpc.covers(config.tcr_anchor.anchor_year):
        raise RangeError(
            f"T_cr 锚点年 {config.tcr_anchor.anchor_year} 不在人均GDP序列 {gpc.start_year}-{gpc.end_year} 内"
        )
    if args.output:
        frame = pd.DataFrame(rows, columns=["name", "unit", "first", "last", "points"])
        write_table(frame, args.output, echo_metadata(config, args.command))
    return summary

"""参数标定子命令：定义年龄、常数增量 A、年均增量"""

import logging
from typing import Any, Dict

import numpy as np
import pandas as pd

from gdpgrowth import (
    TrendSpec,
    build_run,
    calibrate_defining_age,
    cohort_series_by_age,
    fit_trend_least_squares,
    fit_trend_preserving,
    increment_regression,
    mean_increment,
    write_run,
    write_table,
)
from gdpgrowth.errors import ConfigError
from gdpgrowth.model import trend_series

from .inputs import clip, echo_metadata, load_gpc, load_growth, load_pyramid, percap_growth, require_config

logger = logging.getLogger(__name__)


def parse_ages(text: str):
    """"1-25" 或 "7,8,9,10" 形式的候选年龄"""
    ages = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                lo, hi = (int(x) for x in part.split("-", 1))
                ages.update(range(lo, hi + 1))
            else:
                ages.add(int(part))
        except ValueError:
            raise ConfigError(f"候选年龄格式非法: '{part}'")
    if not ages:
        raise ConfigError("没有候选年龄")
    return sorted(ages)


def calibrate_age(args, config) -> Dict[str, Any]:
    """逐年龄代入公式(1)，--percap 时代入公式(7)，按 RMSE 选取定义年龄"""
    config = require_config(config, args.command)
    pyramid = load_pyramid(config, args.pyramid)
    cohorts = cohort_series_by_age(pyramid, parse_ages(args.ages))
    if args.percap:
        if args.fixed_tcr:
            raise ConfigError("--percap 与 --fixed-tcr 不能同时使用")
        gpc = load_gpc(config)
        observed = percap_growth(config, gpc)
    else:
        observed = load_growth(config)
        gpc = None if args.fixed_tcr else load_gpc(config)
    window = config.calibration_window
    if args.start is not None or args.end is not None:
        window = (args.start if args.start is not None else observed.start_year,
                  args.end if args.end is not None else observed.end_year)
    result = calibrate_defining_age(cohorts, observed, config.trend(percap=args.percap), gpc, window,
                                    config.change_convention, workers=args.workers)
    if args.output:
        frame = pd.DataFrame(sorted(result.per_age_scores.items()), columns=["age", "rmse"])
        write_table(frame, args.output, echo_metadata(config, args.command))
    return {
        "best_age": result.best_age,
        "rmse": result.per_age_scores[result.best_age],
        "runner_up_margin": result.runner_up_margin,
        "configured_age": config.defining_age,
    }


def fit_trend(args, config) -> Dict[str, Any]:
    """拟合常数增量 A，默认保持总增长量"""
    config = require_config(config, args.command)
    gpc = load_gpc(config, args.corrected)
    growth = clip(percap_growth(config, gpc), args.start, args.end)
    if args.method == "least-squares":
        A = fit_trend_least_squares(growth, gpc)
    else:
        A = fit_trend_preserving(growth, gpc)
    run = build_run(args.command, trend_series(TrendSpec.constant_increment(A), gpc).window(
        growth.start_year, growth.end_year), growth)
    if args.output:
        write_run(run, args.output, echo_metadata(config, args.command))
    return {
        "A": A,
        "method": args.method,
        "years": f"{growth.start_year}-{growth.end_year}",
        "corrected": args.corrected,
        "total_observed": float(np.sum(run.observed.array)),
        "total_trend": float(np.sum(run.predicted.array)),
    }


def mean_increment_cmd(args, config) -> Dict[str, Any]:
    """公式(4)/(5)：年均绝对增量与增量对水平的回归"""
    config = require_config(config, args.command)
    gpc = clip(load_gpc(config, args.corrected), args.start, args.end)
    regression = increment_regression(gpc)
    if args.output:
        frame = pd.DataFrame({
            "year": gpc.years,
            "gdp_percap": gpc.array,
            "increment": np.concatenate(([np.nan], np.diff(gpc.array))),
        })
        write_table(frame, args.output, echo_metadata(config, args.command))
    return {
        "years": f"{gpc.start_year}-{gpc.end_year}",
        "mean_increment": mean_increment(gpc),
        "slope": regression.slope,
        "intercept": regression.intercept,
    }


"""正向预测与队列投影子命令"""

import logging
from typing import Any, Dict

from gdpgrowth import (
    Unit,
    build_run,
    predict_growth,
    predict_growth_percap,
    project_cohort,
    write_run,
    write_series,
)
from gdpgrowth.cohort import achievable_years

from .inputs import (
    clip,
    echo_metadata,
    load_cohort,
    load_gpc,
    load_growth,
    load_pyramid,
    percap_growth,
    require_config,
)

logger = logging.getLogger(__name__)


def _run_summary(run) -> Dict[str, Any]:
    return {
        "years": f"{run.predicted.start_year}-{run.predicted.end_year}",
        "rmse": run.rmse,
        "correlation": run.correlation,
    }


def predict(args, config) -> Dict[str, Any]:
    """公式(1)：总量GDP增长率预测，T_cr 默认按人均GDP演化"""
    config = require_config(config, args.command)
    cohort = load_cohort(config, args.pyramid, args.age)
    observed = load_growth(config)
    gpc = None if args.fixed_tcr else load_gpc(config)
    predicted = clip(predict_growth(cohort, config.trend(), gpc, config.change_convention),
                     args.start, args.end)
    run = build_run("predict", predicted, observed)
    logger.info(f"预测完成: {run.predicted.start_year}-{run.predicted.end_year}，RMSE {run.rmse:.5f}")
    if args.output:
        write_run(run, args.output, echo_metadata(config, args.command))
    return _run_summary(run)


def predict_percap(args, config) -> Dict[str, Any]:
    """公式(7)：人均GDP增长率预测"""
    config = require_config(config, args.command)
    cohort = load_cohort(config, args.pyramid, args.age)
    gpc = load_gpc(config, args.corrected)
    trend = config.trend(percap=True)
    predicted = clip(predict_growth_percap(cohort, trend.A, gpc, config.change_convention),
                     args.start, args.end)
    run = build_run("predict-percap", predicted, percap_growth(config, gpc))
    if args.output:
        write_run(run, args.output, echo_metadata(config, args.command))
    summary = _run_summary(run)
    summary["A"] = trend.A
    return summary


def project(args, config) -> Dict[str, Any]:
    """金字塔投影为单岁人口序列"""
    config = require_config(config, args.command)
    age = config.defining_age if args.age is None else args.age
    pyramid = load_pyramid(config, args.pyramid)
    year_range = None
    if args.start is not None or args.end is not None:
        lo, hi = achievable_years(pyramid, age)
        year_range = (lo if args.start is None else args.start, hi if args.end is None else args.end)
    projection = project_cohort(pyramid, age, year_range)
    series = projection.series
    if args.output:
        write_series(series, args.output, echo_metadata(config, args.command))
    return {
        "age": age,
        "years": f"{series.start_year}-{series.end_year}",
        "clipped": projection.clipped,
        "unit": Unit.PERSONS.value,
    }

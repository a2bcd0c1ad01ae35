"""派生分析子命令：增长分解、复利陷阱演示"""

import logging
from typing import Any, Dict

import pandas as pd

from gdpgrowth import compounding_demo, decompose, write_report, write_table
from gdpgrowth.errors import ConfigError

from .inputs import echo_metadata, load_cohort, load_gpc, require_config

logger = logging.getLogger(__name__)


def decompose_cmd(args, config) -> Dict[str, Any]:
    """人口分量 / 趋势分量拆分

    数值参数直接给出时不需要配置；缺少人均GDP端点时按 --start/--end 从 GDP_PERCAP_FILE 读取，
    缺少人口端点时从 --pyramid 投影的定义年龄序列读取。
    """
    g_start, g_end = args.g_start, args.g_end
    n_start, n_end = args.n_start, args.n_end
    start, end = args.start, args.end
    if g_start is None or g_end is None or n_start is None or n_end is None:
        config = require_config(config, args.command)
        if start is None or end is None:
            raise ConfigError("从数据文件读取端点时需要 --start 与 --end")
        if g_start is None or g_end is None:
            gpc = load_gpc(config, args.corrected)
            g_start = gpc.value_at(start) if g_start is None else g_start
            g_end = gpc.value_at(end) if g_end is None else g_end
        if n_start is None or n_end is None:
            if args.pyramid is None:
                raise ConfigError("缺少 --n-start/--n-end 时需要 --pyramid")
            cohort = load_cohort(config, args.pyramid)
            n_start = cohort.value_at(start) if n_start is None else n_start
            n_end = cohort.value_at(end) if n_end is None else n_end

    years = args.years
    if years is None:
        if start is None or end is None:
            raise ConfigError("需要 --years 或 --start 与 --end")
        years = end - start
    period = (start, end) if start is not None and end is not None else None

    report = decompose(n_start, n_end, g_start, g_end, years, period=period,
                       total_basis=args.basis, mean_increment=args.mean_increment)
    if args.output:
        write_report(report, args.output, echo_metadata(config, args.command))
    return {
        "population": report.population_component,
        "trend": report.trend_component,
        "total": report.total_factor,
        "share": report.population_share,
        "mean_increment": report.mean_increment,
        "trend_dollars": report.trend_dollars,
        "population_dollars": report.population_dollars,
    }


def compounding(args, config) -> Dict[str, Any]:
    """振荡增长率与平滑增长率复利后的总因子对比"""
    result = compounding_demo(args.mean, args.amplitude, args.years,
                              args.compare_mean, args.compare_amplitude)
    if args.output:
        write_table(pd.DataFrame([result.model_dump()]), args.output, echo_metadata(config, args.command))
    summary = {
        "oscillating": result.total_factor_oscillating,
        "smooth": result.total_factor_smooth,
        "closed_form": result.closed_form,
    }
    if result.comparison_oscillating is not None:
        summary.update(comparison_oscillating=result.comparison_oscillating,
                       comparison_smooth=result.comparison_smooth)
    return summary

"""反演与初始人数标定子命令"""

import logging
from typing import Any, Dict

from gdpgrowth import (
    InversionSetup,
    build_run,
    fit_initial_count,
    recover_population,
    recover_population_percap,
    write_run,
)
from gdpgrowth.inversion import SEARCH_RESOLUTION, UNCERTAINTY_BAND

from .inputs import (
    clip,
    echo_metadata,
    load_cohort,
    load_gpc,
    load_growth,
    percap_growth,
    require_config,
)

logger = logging.getLogger(__name__)


def _setup(args, config, initial_count: float):
    """总量或人均反演的设定与对应人均GDP序列"""
    if getattr(args, "percap", False) or args.command == "invert-percap":
        gpc = load_gpc(config, args.corrected)
        setup = InversionSetup(initial_year=args.initial_year, initial_count=initial_count,
                               trend=config.trend(percap=True),
                               observed_growth=percap_growth(config, gpc))
        return setup, gpc
    gpc = None if args.fixed_tcr else load_gpc(config)
    setup = InversionSetup(initial_year=args.initial_year, initial_count=initial_count,
                           trend=config.trend(), observed_growth=load_growth(config))
    return setup, gpc


def _invert(args, config) -> Dict[str, Any]:
    config = require_config(config, args.command)
    setup, gpc = _setup(args, config, args.initial_count)
    update = args.update or config.inversion_update
    if args.command == "invert-percap":
        recovered = recover_population_percap(setup, gpc, update)
    else:
        recovered = recover_population(setup, gpc, update)
    recovered = clip(recovered, None, args.end)

    target = None
    if args.pyramid is not None:
        target = load_cohort(config, args.pyramid)
    run = build_run(args.command, recovered, target,
                    band=UNCERTAINTY_BAND if target is not None else None)
    if args.output:
        write_run(run, args.output, echo_metadata(config, args.command))
    summary = {
        "years": f"{recovered.start_year}-{recovered.end_year}",
        "initial_count": args.initial_count,
        "final_count": recovered.values[-1],
    }
    if target is not None:
        summary.update(rmse=run.rmse, band_coverage=run.band_coverage)
    return summary


def invert(args, config) -> Dict[str, Any]:
    """公式(3)：由总量GDP增长率反演"""
    return _invert(args, config)


def invert_percap(args, config) -> Dict[str, Any]:
    """公式(8)：由人均GDP增长率反演"""
    return _invert(args, config)


def fit_n0(args, config) -> Dict[str, Any]:
    """搜索 N(t0) 使反演序列与金字塔投影在窗口内最接近"""
    config = require_config(config, args.command)
    lo, hi = args.range
    setup, gpc = _setup(args, config, lo)
    update = args.update or config.inversion_update
    target = load_cohort(config, args.pyramid)
    window = tuple(args.window) if args.window else target.year_range
    resolution = SEARCH_RESOLUTION if args.resolution is None else args.resolution
    fit = fit_initial_count((lo, hi), target, window, setup, gpc, update,
                            method=args.method, resolution=resolution,
                            workers=args.workers)
    if args.output:
        best = recover_population(setup.model_copy(update={"initial_count": fit.initial_count}), gpc, update)
        run = build_run(args.command, best.window(*fit.window), target, band=UNCERTAINTY_BAND)
        write_run(run, args.output, echo_metadata(config, args.command))
    return {
        "initial_year": args.initial_year,
        "n0": fit.initial_count,
        "rmse": fit.rmse,
        "band_coverage": fit.band_coverage,
        "window": f"{fit.window[0]}-{fit.window[1]}",
        "evaluations": fit.evaluations,
    }

"""人口结构驱动的实际GDP增长模型

由定义年龄人口序列与经济趋势项预测实际GDP增长率，反演观测GDP得到人口序列，
并完成定义年龄、常数增量与初始人口的标定以及增长分解。
"""

from .analysis import (
    CompoundingResult,
    DecompositionReport,
    compounding_demo,
    decompose,
    interpolate_ratios,
    percap_correction,
    trend_share_growth,
)
from .calibration import (
    AgeSearchResult,
    IncrementRegression,
    calibrate_defining_age,
    fit_trend_least_squares,
    fit_trend_preserving,
    increment_regression,
    mean_increment,
)
from .cohort import (
    CohortProjection,
    adjacent_ratio_exact,
    adjacent_ratio_paper_approx,
    adjacent_ratio_printed_approx,
    cohort_series_by_age,
    compare_adjacent_ratio,
    project_cohort,
    shift_cohort,
)
from .data_io import (
    CountryConfig,
    convert_table,
    read_config,
    read_pyramid,
    read_run,
    read_series,
    write_pyramid,
    write_report,
    write_run,
    write_series,
    write_table,
)
from .errors import (
    AlignmentError,
    ConfigError,
    DataFormatError,
    DomainError,
    GdpModelError,
    InsufficientDataError,
    RangeError,
    UnitMismatchError,
)
from .inversion import (
    InitialCountFit,
    InversionSetup,
    InversionUpdate,
    fit_initial_count,
    recover_population,
    recover_population_percap,
)
from .model import (
    ForecastResult,
    ModelRun,
    TcrAnchor,
    TrendKind,
    TrendSpec,
    build_run,
    evolve_tcr,
    forecast_growth,
    per_capita,
    predict_growth,
    predict_growth_percap,
    trend_term,
)
from .series_core import (
    AgePyramid,
    AnnualSeries,
    ChangeConvention,
    Unit,
    accumulate,
    align,
    change,
    log_change,
    relative_change,
)

__version__ = "1.0.0"

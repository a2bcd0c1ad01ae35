"""人口结构GDP增长模型命令行入口

用法: python -m backend.main <子命令> --config gdpgrowth/data/usa/usa.env [选项]
"""

from typing import Any, Callable, Dict, List, Optional
import os
import sys
import logging
import argparse
from dotenv import load_dotenv
from pydantic import ValidationError

from gdpgrowth.errors import (
    AlignmentError,
    ConfigError,
    DataFormatError,
    DomainError,
    GdpModelError,
    InsufficientDataError,
    RangeError,
    UnitMismatchError,
)
from gdpgrowth.data_io import read_config
from backend.prompt import commands as help_text
from backend.tools.analyze import compounding, decompose_cmd
from backend.tools.calibrate import calibrate_age, fit_trend, mean_increment_cmd
from backend.tools.invert import fit_n0, invert, invert_percap
from backend.tools.predict import predict, predict_percap, project
from backend.tools.validate import validate

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# 错误类型 -> 错误类别，按顺序匹配，子类在前
error_type_mappings = [
    {"error_type": DataFormatError, "error_message": "数据文件格式错误"},
    {"error_type": ConfigError, "error_message": "配置错误"},
    {"error_type": UnitMismatchError, "error_message": "单位不一致"},
    {"error_type": DomainError, "error_message": "数值超出定义域"},
    {"error_type": AlignmentError, "error_message": "年份区间无交集"},
    {"error_type": RangeError, "error_message": "年份或年龄范围无法覆盖"},
    {"error_type": InsufficientDataError, "error_message": "重叠数据不足"},
    {"error_type": GdpModelError, "error_message": "模型错误"},
    {"error_type": ValidationError, "error_message": "参数校验失败"},
    {"error_type": OSError, "error_message": "文件读写错误"},
]


def analyze_error(error: Exception) -> Optional[str]:
    """返回错误类别，非预期错误返回 None"""
    for mapping in error_type_mappings:
        if isinstance(error, mapping["error_type"]):
            return mapping["error_message"]
    return None


def _error_detail(error: Exception) -> str:
    if isinstance(error, ValidationError):
        err = error.errors()[0]
        loc = ".".join(str(x) for x in err["loc"])
        return f"{loc}: {err['msg']}" if loc else err["msg"]
    return str(error)


def setup_logging(verbose: bool = False) -> None:
    """日志输出到标准错误与 GDP_LOG_FILE（默认 app.log，置空则不写文件）"""
    level_name = "DEBUG" if verbose else os.getenv("GDP_LOG_LEVEL", "INFO").upper()
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    log_file = os.getenv("GDP_LOG_FILE", "app.log")
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def default_workers() -> int:
    try:
        return max(1, int(os.getenv("GDP_WORKERS", "1")))
    except ValueError:
        return 1


def _parse_set(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"应为 KEY=VALUE: '{text}'")
    key, value = text.split("=", 1)
    return key.strip().upper(), value.strip()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="国家配置文件 (KEY=VALUE)")
    common.add_argument("--set", dest="overrides", action="append", type=_parse_set, default=[],
                        metavar="KEY=VALUE", help="覆盖配置项，可重复")
    common.add_argument("--output", "-o", help="输出文件路径")
    common.add_argument("--verbose", "-v", action="store_true", help="输出调试日志")

    parser = argparse.ArgumentParser(
        prog="gdpgrowth",
        description="人口结构驱动的实际GDP增长模型",
        epilog=help_text.common_epilog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", metavar="<子命令>")
    sub.required = True

    def add(name: str, text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=text.splitlines()[0], description=text,
                              epilog=help_text.common_epilog,
                              formatter_class=argparse.RawDescriptionHelpFormatter)

    def add_years(p: argparse.ArgumentParser) -> None:
        p.add_argument("--start", type=int, help="起始年份")
        p.add_argument("--end", type=int, help="结束年份")

    p = add("predict", help_text.predict_help)
    p.add_argument("--pyramid", type=int, help="用于队列投影的金字塔年份")
    p.add_argument("--age", type=int, help="定义年龄，缺省取配置 DEFINING_AGE")
    p.add_argument("--fixed-tcr", action="store_true", help="T_cr 固定为锚点值")
    add_years(p)

    p = add("predict-percap", help_text.predict_percap_help)
    p.add_argument("--pyramid", type=int, help="用于队列投影的金字塔年份")
    p.add_argument("--age", type=int, help="定义年龄，缺省取配置 DEFINING_AGE")
    p.add_argument("--corrected", action="store_true", help="人均GDP做15岁以上人口修正")
    add_years(p)

    for name, text in (("invert", help_text.invert_help), ("invert-percap", help_text.invert_percap_help)):
        p = add(name, text)
        p.add_argument("--initial-year", type=int, required=True, help="初始年 t0")
        p.add_argument("--initial-count", type=float, required=True, help="N(t0)")
        p.add_argument("--end", type=int, help="结束年份")
        p.add_argument("--pyramid", type=int, help="对照用金字塔年份")
        p.add_argument("--update", choices=["exponential", "linear"], help="递推方式，缺省取配置")
        if name == "invert":
            p.add_argument("--fixed-tcr", action="store_true", help="T_cr 固定为锚点值")
        else:
            p.add_argument("--corrected", action="store_true", help="人均GDP做15岁以上人口修正")

    p = add("fit-n0", help_text.fit_n0_help)
    p.add_argument("--initial-year", type=int, required=True, help="初始年 t0")
    p.add_argument("--pyramid", type=int, required=True, help="目标金字塔年份")
    p.add_argument("--range", type=float, nargs=2, required=True, metavar=("LO", "HI"), help="N(t0) 候选区间")
    p.add_argument("--window", type=int, nargs=2, metavar=("START", "END"), help="比较窗口")
    p.add_argument("--method", choices=["golden", "grid"], default="golden")
    p.add_argument("--resolution", type=float, help="搜索分辨率（人），缺省 1000")
    p.add_argument("--update", choices=["exponential", "linear"], help="递推方式，缺省取配置")
    p.add_argument("--percap", action="store_true", help="使用公式(8)")
    p.add_argument("--corrected", action="store_true", help="人均GDP做15岁以上人口修正")
    p.add_argument("--fixed-tcr", action="store_true", help="T_cr 固定为锚点值")

    p = add("calibrate-age", help_text.calibrate_age_help)
    p.add_argument("--pyramid", type=int, required=True, help="金字塔年份")
    p.add_argument("--ages", default="1-25", help="候选年龄，如 1-25 或 7,8,9")
    p.add_argument("--fixed-tcr", action="store_true", help="T_cr 固定为锚点值")
    p.add_argument("--percap", action="store_true", help="用人均GDP增长率与 A/G 趋势评分")
    add_years(p)

    p = add("fit-trend", help_text.fit_trend_help)
    p.add_argument("--method", choices=["preserving", "least-squares"], default="preserving")
    p.add_argument("--corrected", action="store_true", help="人均GDP做15岁以上人口修正")
    add_years(p)

    p = add("mean-increment", help_text.mean_increment_help)
    p.add_argument("--corrected", action="store_true", help="人均GDP做15岁以上人口修正")
    add_years(p)

    p = add("decompose", help_text.decompose_help)
    p.add_argument("--n-start", type=float, help="期初定义年龄人口")
    p.add_argument("--n-end", type=float, help="期末定义年龄人口")
    p.add_argument("--g-start", type=float, help="期初人均GDP")
    p.add_argument("--g-end", type=float, help="期末人均GDP")
    p.add_argument("--years", type=int, help="期间年数，缺省为 end - start")
    p.add_argument("--basis", choices=["ratio", "increase"], default="ratio",
                   help="总增长口径：ratio 为 G_end/G_start，increase 为 G_end/G_start - 1")
    p.add_argument("--mean-increment", type=float, help="年均增量，缺省由端点计算")
    p.add_argument("--pyramid", type=int, help="人口端点取该金字塔的投影")
    p.add_argument("--corrected", action="store_true", help="人均GDP做15岁以上人口修正")
    add_years(p)

    p = add("project-cohort", help_text.project_cohort_help)
    p.add_argument("--pyramid", type=int, required=True, help="金字塔年份")
    p.add_argument("--age", type=int, help="目标年龄，缺省取配置 DEFINING_AGE")
    add_years(p)

    p = add("compounding-demo", help_text.compounding_demo_help)
    p.add_argument("--mean", type=float, required=True, help="平均增长率")
    p.add_argument("--amplitude", type=float, required=True, help="振荡幅度")
    p.add_argument("--years", type=int, required=True, help="年数（偶数）")
    p.add_argument("--compare-mean", type=float, help="对照组平均增长率")
    p.add_argument("--compare-amplitude", type=float, help="对照组振荡幅度")

    add("validate", help_text.validate_help)
    return parser


COMMANDS: Dict[str, Callable[[argparse.Namespace, Any], Dict[str, Any]]] = {
    "predict": predict,
    "predict-percap": predict_percap,
    "invert": invert,
    "invert-percap": invert_percap,
    "fit-n0": fit_n0,
    "calibrate-age": calibrate_age,
    "fit-trend": fit_trend,
    "mean-increment": mean_increment_cmd,
    "decompose": decompose_cmd,
    "project-cohort": project,
    "compounding-demo": compounding,
    "validate": validate,
}


def format_summary(command: str, summary: Dict[str, Any]) -> str:
    """单行摘要，浮点数取6位有效数字"""
    parts = []
    for key, value in summary.items():
        if value is None:
            continue
        if isinstance(value, float):
            value = f"{value:.6g}"
        parts.append(f"{key}={value}")
    return f"{command}: " + " ".join(parts)


def run(argv: Optional[List[str]] = None) -> int:
    """执行一次命令，返回退出码 0/1/2"""
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    setup_logging(args.verbose)
    args.workers = default_workers()

    try:
        config = None
        if args.config:
            config = read_config(args.config, dict(args.overrides))
            logger.info(f"读取配置 {args.config}: {config.country_code}，定义年龄 {config.defining_age}")
        elif args.overrides:
            logger.warning("未指定 --config，忽略 --set")
        summary = COMMANDS[args.command](args, config)
    except Exception as e:
        category = analyze_error(e)
        if category is None:
            raise
        message = f"[{args.command}] {category}: {_error_detail(e)}"
        logger.error(message)
        print(f"错误: {message}", file=sys.stderr)
        return 1

    print(format_summary(args.command, summary))
    return 0


def main() -> None:
    # 确保标准输出使用UTF-8编码
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding='utf-8', errors='replace')
    sys.exit(run())


if __name__ == "__main__":
    main()

"""开发用绘图脚本：把 write_run 输出的 CSV 画成观测/预测曲线

用法: python -m backend.tools.plot_run run.csv [--save run.png]
"""

import argparse
import logging
import sys

from gdpgrowth import GdpModelError, read_run

logger = logging.getLogger(__name__)


def plot_run(path: str, save: str = None) -> None:
    import matplotlib
    if save:
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    metadata, frame = read_run(path)
    fig, ax = plt.subplots(figsize=(10, 5))
    ax.plot(frame["year"], frame["observed"], "o-", label="observed", markersize=3)
    ax.plot(frame["year"], frame["predicted"], "s--", label="predicted", markersize=3)
    ax.set_xlabel("year")
    ax.set_title(f"{metadata.get('COUNTRY_CODE', '')} {metadata.get('command', '')}".strip())
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    if save:
        fig.savefig(save, dpi=120)
        logger.info(f"图像已保存: {save}")
    else:
        plt.show()


def main() -> None:
    logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    parser = argparse.ArgumentParser(description="绘制模型结果 CSV")
    parser.add_argument("path")
    parser.add_argument("--save", help="保存为图片而不是弹出窗口")
    args = parser.parse_args()
    try:
        plot_run(args.path, args.save)
    except GdpModelError as e:
        print(f"错误: {e}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()

"""一维搜索

黄金分割搜索用于单峰目标函数；网格搜索用于校验，结果按自变量升序比较，平局取较小值。
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Tuple

import numpy as np

from ..errors import DomainError

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def golden_section_search(f: Callable[[float], float], a: float, b: float,
                          tol: float = 1e-5) -> Tuple[float, float, int]:
    """黄金分割搜索

    参数:
    - f: 在 [a, b] 内只有一个局部极小值的函数
    - a, b: 初始区间
    - tol: 最终区间宽度

    返回:
    - (极小点, 极小值, 函数调用次数)
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = (a + b) / 2
        return x, f(x), 1

    # 达到精度所需的迭代次数
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    calls = 2

    for _ in range(n - 1):
        if yc <= yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)
        calls += 1

    if yc <= yd:
        x = (a + d) / 2
    else:
        x = (c + b) / 2
    return x, f(x), calls + 1


def grid_search(f: Callable[[float], float], lo: float, hi: float, step: float,
                workers: int = 1) -> Tuple[float, float, int]:
    """等步长网格搜索，workers > 1 时并行求值，结果与求值顺序无关"""
    if step <= 0:
        raise DomainError(f"步长必须为正: {step}")
    grid = np.arange(lo, hi + step / 2, step)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(f, grid))
    else:
        values = [f(x) for x in grid]
    best = 0
    for i, v in enumerate(values):
        if v < values[best]:
            best = i
    return float(grid[best]), float(values[best]), len(grid)

"""拟合指标"""

import numpy as np

from ..errors import DomainError


def rmse(observed, estimated) -> float:
    """均方根误差"""
    res = np.asarray(observed, dtype=float) - np.asarray(estimated, dtype=float)
    if res.size == 0:
        raise DomainError("没有可比较的数据点")
    return float(np.sqrt(np.mean(res ** 2)))


def correlation(observed, estimated) -> float:
    """皮尔逊相关系数，样本不足或方差为零时返回 nan"""
    a = np.asarray(observed, dtype=float)
    b = np.asarray(estimated, dtype=float)
    if a.size < 2 or np.std(a) == 0 or np.std(b) == 0:
        return float("nan")
    return float(np.corrcoef(a, b)[0][1])


def band_coverage(estimate, recovered, band: float = 0.05) -> float:
    """|recovered - estimate| / estimate <= band 的年份占比"""
    est = np.asarray(estimate, dtype=float)
    rec = np.asarray(recovered, dtype=float)
    if est.size == 0:
        raise DomainError("没有可比较的数据点")
    inside = np.abs(rec - est) <= band * np.abs(est)
    return float(np.mean(inside))

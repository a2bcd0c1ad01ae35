"""模型错误类型

库内所有可预期的错误都继承自 GdpModelError，命令行入口据此映射退出码。
"""

from typing import Optional, Tuple


class GdpModelError(Exception):
    """所有模型错误的基类"""


class DomainError(GdpModelError, ValueError):
    """数值不在定义域内（非正值、比值小于1等）"""

    def __init__(self, message: str, year: Optional[int] = None):
        super().__init__(message)
        self.year = year


class UnitMismatchError(DomainError):
    """单位标签或美元基期不一致"""


class RangeError(GdpModelError, ValueError):
    """年份或年龄范围无法覆盖"""


class AlignmentError(RangeError):
    """两个序列的年份区间没有交集"""

    def __init__(self, range_a: Tuple[int, int], range_b: Tuple[int, int]):
        super().__init__(
            f"年份区间无交集: {range_a[0]}-{range_a[1]} 与 {range_b[0]}-{range_b[1]}"
        )
        self.range_a = range_a
        self.range_b = range_b


class InsufficientDataError(GdpModelError):
    """重叠数据不足以完成拟合"""


class DataFormatError(GdpModelError, ValueError):
    """输入文件格式错误"""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        location = ""
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
            location += ": "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line = line


class ConfigError(GdpModelError):
    """配置缺失或取值非法"""

"""
Bessel函数工具 - 函数值、导数与正零点

函数值来自 scipy.special.jv；零点先用步长0.1的符号变化括住，再用 brentq 精化。
"""
import math
from functools import lru_cache
from typing import Literal, Union

import numpy as np
from scipy.optimize import brentq
from scipy.special import jv

from app.core.exceptions import InvalidArgumentException, NumericalFailureException
from app.core.logging import get_logger

logger = get_logger(__name__)

ZeroKind = Literal["j", "jp"]

SCAN_STEP = 0.1
ZERO_XTOL = 1e-14


def _check_order(order: int) -> None:
    if isinstance(order, bool) or int(order) != order or order < 0:
        raise InvalidArgumentException(f"Bessel阶数必须是非负整数: {order}")


def bessel_j(order: int, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    第一类Bessel函数 J_n(x)

    Args:
        order: 阶数 n ≥ 0
        x: 自变量 x ≥ 0（标量或数组）

    Returns:
        J_n(x)
    """
    _check_order(order)
    values = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(values)):
        raise InvalidArgumentException("Bessel函数自变量必须是有限数")
    if np.any(values < 0):
        raise InvalidArgumentException(f"Bessel函数自变量必须非负: {x}")
    result = jv(int(order), values)
    return float(result) if np.ndim(result) == 0 else result


def bessel_j_prime(order: int, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """J_n′(x) = (J_{n−1}(x) − J_{n+1}(x)) / 2，n = 0 时为 −J_1(x)"""
    _check_order(order)
    if order == 0:
        return -bessel_j(1, x)
    return 0.5 * (bessel_j(order - 1, x) - bessel_j(order + 1, x))


def _target(order: int, kind: ZeroKind):
    if kind == "j":
        return lambda value: float(bessel_j(order, value))
    return lambda value: float(bessel_j_prime(order, value))


@lru_cache(maxsize=512)
def bessel_zero(order: int, rank: int, kind: ZeroKind = "j") -> float:
    """
    J_n 或 J_n′ 的第k个正零点

    Args:
        order: 阶数 n
        rank: 零点序号 k ≥ 1
        kind: "j" 表示 J_n 的零点，"jp" 表示 J_n′ 的零点

    Returns:
        零点位置（绝对误差 ≤ 1e-10）

    Raises:
        NumericalFailureException: 在扫描范围内无法括住零点
    """
    _check_order(order)
    if isinstance(rank, bool) or int(rank) != rank or rank < 1:
        raise InvalidArgumentException(f"零点序号必须 ≥ 1: {rank}")
    if kind not in ("j", "jp"):
        raise InvalidArgumentException(f"未知的零点类型: {kind}")

    func = _target(order, kind)
    # 相邻零点间距约为π，上限留出足够余量
    limit = (rank + 0.5 * order + 2.0) * math.pi + 10.0
    lo = SCAN_STEP
    f_lo = func(lo)
    found = 0
    while lo < limit:
        hi = lo + SCAN_STEP
        f_hi = func(hi)
        if f_hi == 0.0:
            found += 1
            if found == rank:
                return hi
            hi += SCAN_STEP * 1e-3
            f_hi = func(hi)
        elif f_lo * f_hi < 0:
            found += 1
            if found == rank:
                root = brentq(func, lo, hi, xtol=ZERO_XTOL, rtol=4 * np.finfo(float).eps, maxiter=200)
                logger.debug(f"J_{order}{'′' if kind == 'jp' else ''} 第{rank}个零点: {root:.15f}")
                return float(root)
        lo, f_lo = hi, f_hi

    raise NumericalFailureException(
        f"无法括住 J_{order}{'′' if kind == 'jp' else ''} 的第{rank}个零点",
        details={"order": order, "rank": rank, "kind": kind, "scan_limit": limit},
    )

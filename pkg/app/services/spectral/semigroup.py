"""
热半群在模态系数上的作用
"""
import numpy as np

from app.core.exceptions import InvalidArgumentException
from app.services.spectral.modes import ModeBasis


def semigroup_apply(basis: ModeBasis, coefficients, t: float) -> np.ndarray:
    """
    S(t) 作用于模态系数：第m个系数乘以 exp(λ_m t)，模态之间不混合

    Args:
        basis: 截断基
        coefficients: 长度为M的系数向量
        t: 时间 t ≥ 0

    Returns:
        演化后的系数向量
    """
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.shape != (basis.size,):
        raise InvalidArgumentException(f"系数长度 {coefficients.shape} 与模态数 {basis.size} 不一致")
    if not np.isfinite(t) or t < 0:
        raise InvalidArgumentException(f"时间必须非负: {t}")
    return coefficients * np.exp(basis.eigenvalues * t)


def decay_matrix(basis: ModeBasis, times) -> np.ndarray:
    """exp(λ_m t_k) 组成的 (时刻数 × M) 矩阵"""
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise InvalidArgumentException("采样时刻必须非负")
    return np.exp(np.outer(times, basis.eigenvalues))

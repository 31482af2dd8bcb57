"""
初始状态重构 - 截断模态模型上的指数拟合最小二乘

设计矩阵 A 的行对应 (传感器 i, 时刻 t_k)，列对应模态 m：A[(i,k), m] = c_{i,m}·exp(λ_m t_k)。
列先缩放到单位范数再求解，输出时撤销缩放。列范数低于 ε_rank·max 的模态，以及所在特征值组的
输出系数子块秩不足的模态，标记为不可辨识。
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from app.core.config import settings
from app.core.exceptions import InvalidArgumentException
from app.core.logging import get_logger
from app.models.geometry import BoundaryRegion
from app.models.scenario import InitialState
from app.services.boundary.gamma_basis import GammaBasis
from app.services.boundary.quadrature import QuadratureRule
from app.services.boundary.trace import boundary_length, locate, region_nodes, restriction_norms
from app.services.observability.rank_test import numerical_rank
from app.services.sensors.output import OutputSamples, coefficient_matrix
from app.services.spectral.modes import ModeBasis, ModeIndex, mode_values
from app.services.spectral.semigroup import decay_matrix

logger = get_logger(__name__)


@dataclass(frozen=True)
class ModalEstimate:
    """模态系数估计及设计矩阵的条件信息"""
    coefficients: np.ndarray
    identifiable: np.ndarray
    column_norms: np.ndarray
    sigma_min: float
    sigma_max: float
    scaled_condition: Optional[float]
    ridge: float
    sample_count: int
    recommended_samples: int


def design_matrix(coefficients: np.ndarray, basis: ModeBasis, times: np.ndarray) -> np.ndarray:
    """(q·T) × M 设计矩阵，行按传感器再按时刻排列"""
    decay = decay_matrix(basis, times)
    q, m = coefficients.shape
    return (coefficients[:, None, :] * decay[None, :, :]).reshape(q * times.size, m)


def group_identifiable(coefficients: np.ndarray, basis: ModeBasis, candidates: np.ndarray,
                       tolerance: float) -> np.ndarray:
    """
    逐特征值组的可辨识性

    同组模态共享 e^{λt}，设计矩阵中它们的列是输出系数列乘同一个时间因子。组内（去掉已判为不可见的列后）
    输出系数子块秩不足时，这些列线性相关，组内候选模态全部标记为不可辨识。

    Args:
        coefficients: q × M 输出系数矩阵
        basis: 截断基
        candidates: 按列范数判定的可辨识掩码
        tolerance: 相对秩阈值

    Returns:
        布尔掩码（长度 M）
    """
    mask = np.array(candidates, dtype=bool, copy=True)
    for group, block in zip(basis.groups, basis.group_slices()):
        members = np.flatnonzero(mask[block]) + block.start
        if members.size < 2:
            continue
        singular_values = np.linalg.svd(coefficients[:, members], compute_uv=False)
        rank = numerical_rank(singular_values, tolerance)
        if rank < members.size:
            mask[members] = False
            logger.info(f"λ = {group.eigenvalue:.6g} 组的输出系数秩 {rank} < {members.size}，组内模态不可辨识")
    return mask


def reconstruct(samples: OutputSamples, sensors: Sequence, basis: ModeBasis, ridge: float = 0.0,
                tolerance: Optional[float] = None, matrix: Optional[np.ndarray] = None,
                rule: Optional[QuadratureRule] = None) -> ModalEstimate:
    """
    由输出采样估计初始状态的模态系数

    求解 min Σ_{i,k} (y_i(t_k) − Σ_m c_{i,m} e^{λ_m t_k} x₀_m)² + λ_reg‖x₀‖²。

    Args:
        samples: 输出采样
        sensors: 传感器组（与采样的行一一对应）
        basis: 截断基
        ridge: 岭参数 λ_reg ≥ 0
        tolerance: 可辨识阈值（相对于最大列范数）
        matrix: 已计算好的输出系数矩阵（可选）
        rule: 求积规则

    Returns:
        ModalEstimate

    Raises:
        InvalidArgumentException: 采样为空、维数不匹配或岭参数为负
    """
    tolerance = settings.RANK_TOLERANCE if tolerance is None else tolerance
    if samples.values.size == 0:
        raise InvalidArgumentException("输出采样为空")
    if samples.sensor_count != len(sensors):
        raise InvalidArgumentException(f"采样行数 {samples.sensor_count} 与传感器数 {len(sensors)} 不一致")
    if ridge < 0 or not np.isfinite(ridge):
        raise InvalidArgumentException(f"岭参数必须非负: {ridge}")

    coefficients = coefficient_matrix(sensors, basis, rule) if matrix is None else matrix
    design = design_matrix(coefficients, basis, samples.times)
    observed = samples.values.reshape(-1)

    norms = np.linalg.norm(design, axis=0)
    top = float(norms.max()) if norms.size else 0.0
    visible = norms > tolerance * top if top > 0 else np.zeros(basis.size, dtype=bool)
    identifiable = group_identifiable(coefficients, basis, visible, tolerance)

    estimate = np.zeros(basis.size)
    scaled_condition = None
    if visible.any():
        # 组内共线的列仍参与求解（取最小范数分配），只是不标记为可辨识
        kept = norms[visible]
        scaled = design[:, visible] / kept[None, :]
        system, target = scaled, observed
        if ridge > 0:
            # ‖x‖² 在缩放变量 z = norm·x 下为 Σ z²/norm²
            system = np.vstack([scaled, np.diag(math.sqrt(ridge) / kept)])
            target = np.concatenate([observed, np.zeros(kept.size)])
        solution, *_ = np.linalg.lstsq(system, target, rcond=None)
        estimate[visible] = solution / kept

        resolved = scaled[:, identifiable[visible]]
        if resolved.size:
            scaled_values = np.linalg.svd(resolved, compute_uv=False)
            if scaled_values.size == resolved.shape[1] and scaled_values[-1] > 0:
                scaled_condition = float(scaled_values[0] / scaled_values[-1])

    singular_values = np.linalg.svd(design, compute_uv=False)
    sigma_max = float(singular_values[0]) if singular_values.size else 0.0
    sigma_min = float(singular_values[-1]) if singular_values.size == basis.size else 0.0

    recommended = math.ceil(basis.size / max(1, samples.sensor_count))
    if samples.times.size < recommended:
        logger.warning(f"采样时刻数 {samples.times.size} 少于建议值 {recommended}（⌈M/q⌉）")
    hidden = int(np.sum(~identifiable))
    if hidden:
        logger.info(f"{hidden} 个模态系数不可辨识")

    return ModalEstimate(
        coefficients=estimate,
        identifiable=identifiable,
        column_norms=norms,
        sigma_min=sigma_min,
        sigma_max=sigma_max,
        scaled_condition=scaled_condition,
        ridge=float(ridge),
        sample_count=int(observed.size),
        recommended_samples=recommended,
    )


def _coefficient_vector(coefficients: Union[ModalEstimate, np.ndarray, Sequence[float]], basis: ModeBasis) -> np.ndarray:
    values = coefficients.coefficients if isinstance(coefficients, ModalEstimate) else coefficients
    values = np.asarray(values, dtype=float)
    if values.shape != (basis.size,):
        raise InvalidArgumentException(f"系数长度 {values.shape} 与模态数 {basis.size} 不一致")
    return values


@dataclass(frozen=True)
class TraceSamples:
    """Γ 上按弧长采样的迹"""
    arc_length: np.ndarray
    values: np.ndarray


def _trace_points(basis: ModeBasis, region: BoundaryRegion, rule: Optional[QuadratureRule], count: Optional[int]):
    domain = basis.domain
    if count is None:
        nodes = region_nodes(domain, region, rule)
        return nodes.arc_length, nodes.u, nodes.v
    if count < 1:
        raise InvalidArgumentException(f"采样点数必须 ≥ 1: {count}")
    arc = np.linspace(0.0, boundary_length(domain, region), count, endpoint=False)
    native = [domain.edge_point(point.edge, point.coordinate) for point in (locate(domain, region, s) for s in arc)]
    u = np.array([float(a) for a, _ in native])
    v = np.array([float(b) for _, b in native])
    return arc, u, v


def trace_estimate(coefficients: Union[ModalEstimate, np.ndarray, Sequence[float]], basis: ModeBasis,
                   region: BoundaryRegion, rule: Optional[QuadratureRule] = None,
                   count: Optional[int] = None) -> TraceSamples:
    """
    x̂₀ 在Γ上的迹 Σ_m x̂₀_m ψ_m(s)

    Args:
        coefficients: 模态系数或 ModalEstimate
        basis: 截断基
        region: 边界子区域Γ
        rule: 求积规则（默认在Γ的求积节点处采样）
        count: 给出时改为在弧长上均匀取 count 个点

    Returns:
        TraceSamples
    """
    values = _coefficient_vector(coefficients, basis)
    arc, u, v = _trace_points(basis, region, rule, count)
    traces = np.column_stack([mode_values(basis.domain, mode, u, v) for mode in basis.modes])
    return TraceSamples(arc_length=arc, values=traces @ values)


def _difference(x0_true, estimate, basis: ModeBasis) -> np.ndarray:
    difference = _coefficient_vector(x0_true, basis) - _coefficient_vector(estimate, basis)
    if isinstance(estimate, ModalEstimate):
        difference = np.where(estimate.identifiable, difference, 0.0)
    return difference


def reconstruction_error(x0_true, estimate: Union[ModalEstimate, np.ndarray], basis: ModeBasis,
                         region: BoundaryRegion, rule: Optional[QuadratureRule] = None) -> Tuple[float, float]:
    """
    迹差在Γ与∂Ω上的L²代理误差

    不可辨识的系数不计入误差。∂Ω 上的值按 Γ 加补集计算，因此Γ误差不超过∂Ω误差。

    Returns:
        (Γ误差, ∂Ω误差)
    """
    difference = _difference(x0_true, estimate, basis)
    modes = basis.modes

    def trace_difference(u, v):
        return sum(weight * mode_values(basis.domain, mode, u, v) for weight, mode in zip(difference, modes) if weight)

    if not np.any(difference):
        return 0.0, 0.0
    return restriction_norms(basis.domain, region, trace_difference, rule)


def weighted_trace_error(x0_true, estimate: Union[ModalEstimate, np.ndarray], basis: ModeBasis,
                         gamma: GammaBasis) -> float:
    """Γ 上的Sobolev加权代理误差：迹差在试探基下的系数乘以 (1 + k)^{1/2} 后的欧氏范数"""
    difference = _difference(x0_true, estimate, basis)
    nodes = gamma.nodes
    traces = np.column_stack([mode_values(basis.domain, mode, nodes.u, nodes.v) for mode in basis.modes])
    coefficients = gamma.coefficients(traces @ difference)
    return float(np.linalg.norm(coefficients * gamma.sobolev_weights()))


def initial_coefficients(state: InitialState, basis: ModeBasis) -> np.ndarray:
    """
    初始状态的模态系数向量

    Raises:
        InvalidArgumentException: 模态不在截断基中
    """
    coefficients = np.zeros(basis.size)
    for term in state.modes:
        coefficients[basis.position(ModeIndex(term.family, term.i, term.j))] += term.value
    return coefficients

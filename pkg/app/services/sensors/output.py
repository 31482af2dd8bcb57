"""
输出算子 - 传感器与模态的配对系数 c_{i,m} = ⟨φ_m, f_i⟩ 以及输出轨迹模拟
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from app.core.exceptions import InvalidArgumentException
from app.core.logging import get_logger
from app.models.geometry import (
    validate_boundary_point,
    validate_domain_point,
    validate_region,
    validate_support,
)
from app.models.sensor import (
    BoundaryPointwise,
    BoundaryZone,
    Filament,
    InternalPointwise,
    InternalZone,
    Tabulated,
)
from app.services.boundary.quadrature import QuadratureRule, reference_rule, resolve_rule
from app.services.boundary.trace import planar_nodes, region_nodes
from app.services.spectral.modes import Mode, ModeBasis, mode_values
from app.services.spectral.semigroup import decay_matrix

logger = get_logger(__name__)


@dataclass(frozen=True)
class FilamentCurve:
    """细丝曲线的求积离散：笛卡尔节点、弧长坐标与弧长权重"""
    x: np.ndarray
    y: np.ndarray
    arc_length: np.ndarray
    weights: np.ndarray
    total_length: float


def filament_curve(domain, sensor: Filament, rule: Optional[QuadratureRule] = None) -> FilamentCurve:
    """
    以弦长为参数对点列做三次样条插值，并在每个节点区间上生成复合Gauss-Legendre节点

    Raises:
        InvalidArgumentException: 点在Ω外或曲线离开Ω
    """
    rule = resolve_rule(rule)
    for point in sensor.points:
        validate_domain_point(domain, point)

    native = np.array([[float(u), float(v)] for u, v in sensor.points])
    px, py = domain.to_cartesian(native[:, 0], native[:, 1])
    px, py = np.asarray(px, dtype=float), np.asarray(py, dtype=float)
    keep = np.concatenate([[True], np.hypot(np.diff(px), np.diff(py)) > 0])
    px, py = px[keep], py[keep]
    chord = np.concatenate([[0.0], np.cumsum(np.hypot(np.diff(px), np.diff(py)))])

    spline_x = CubicSpline(chord, px)
    spline_y = CubicSpline(chord, py)
    speed_x, speed_y = spline_x.derivative(), spline_y.derivative()

    def speed(t):
        return np.hypot(speed_x(t), speed_y(t))

    ref_nodes, ref_weights = reference_rule(rule.nodes_per_panel)
    xs, ys, arcs, weights = [], [], [], []
    offset = 0.0
    for t_lo, t_hi in zip(chord[:-1], chord[1:]):
        nodes, node_weights = rule.interval(t_lo, t_hi)
        # 区间起点到每个节点的弧长（嵌套求积）
        half = 0.5 * (nodes - t_lo)
        sub_nodes = t_lo + half[:, None] * (ref_nodes[None, :] + 1.0)
        partial = np.sum(half[:, None] * ref_weights[None, :] * speed(sub_nodes), axis=1)
        node_speed = speed(nodes)
        xs.append(spline_x(nodes))
        ys.append(spline_y(nodes))
        arcs.append(offset + partial)
        weights.append(node_weights * node_speed)
        offset += float(np.dot(node_weights, node_speed))

    curve = FilamentCurve(
        x=np.concatenate(xs),
        y=np.concatenate(ys),
        arc_length=np.concatenate(arcs),
        weights=np.concatenate(weights),
        total_length=offset,
    )
    u, v = domain.from_cartesian(curve.x, curve.y)
    inside = [domain.contains(float(a), float(b), 1e-9) for a, b in zip(np.atleast_1d(u), np.atleast_1d(v))]
    if not all(inside):
        raise InvalidArgumentException(f"细丝 {sensor.name} 的插值曲线离开了Ω", details={"sensor": sensor.name})
    return curve


def _check_tabulated(sensor, lo: float, hi: float) -> None:
    distribution = getattr(sensor, "distribution", None)
    if isinstance(distribution, Tabulated) and not distribution.covers(lo, hi):
        raise InvalidArgumentException(
            f"传感器 {sensor.name} 的表格分布没有覆盖支撑集 [{lo}, {hi}]",
            details={"sensor": sensor.name},
        )


def sensor_row(sensor, basis: ModeBasis, rule: Optional[QuadratureRule] = None) -> np.ndarray:
    """
    一个传感器对截断基所有模态的配对系数

    Args:
        sensor: 传感器
        basis: 截断基
        rule: 求积规则

    Returns:
        长度为M的系数向量
    """
    return _pairings(sensor, basis.domain, basis.modes, rule)


def _pairings(sensor, domain, modes: Sequence[Mode], rule: Optional[QuadratureRule]) -> np.ndarray:
    rule = resolve_rule(rule)

    if isinstance(sensor, InternalPointwise):
        validate_domain_point(domain, sensor.location)
        u, v = float(sensor.location[0]), float(sensor.location[1])
        return np.array([float(mode_values(domain, mode, u, v)) for mode in modes])

    if isinstance(sensor, BoundaryPointwise):
        validate_boundary_point(domain, sensor.location)
        u, v = float(sensor.location[0]), float(sensor.location[1])
        return np.array([float(mode_values(domain, mode, u, v)) for mode in modes])

    if isinstance(sensor, InternalZone):
        validate_support(domain, sensor.support)
        bounds = sensor.support.bounds()
        if isinstance(sensor.distribution, Tabulated):
            _check_tabulated(sensor, *bounds[sensor.distribution.axis])
        u, v, weights = planar_nodes(domain, sensor.support, rule)
        weighted = weights * sensor.distribution.evaluate((u, v))
        return np.array([float(np.dot(weighted, mode_values(domain, mode, u, v))) for mode in modes])

    if isinstance(sensor, BoundaryZone):
        validate_region(domain, sensor.support)
        for segment in sensor.support.segments:
            _check_tabulated(sensor, float(segment.lo), float(segment.hi))
        nodes = region_nodes(domain, sensor.support, rule)
        weighted = nodes.weights * sensor.distribution.evaluate((nodes.coordinate,))
        return np.array([float(np.dot(weighted, mode_values(domain, mode, nodes.u, nodes.v))) for mode in modes])

    if isinstance(sensor, Filament):
        curve = filament_curve(domain, sensor, rule)
        _check_tabulated(sensor, 0.0, curve.total_length)
        u, v = domain.from_cartesian(curve.x, curve.y)
        weighted = curve.weights * sensor.distribution.evaluate((curve.arc_length,))
        return np.array([float(np.dot(weighted, mode_values(domain, mode, u, v))) for mode in modes])

    raise InvalidArgumentException(f"未知的传感器类型: {type(sensor).__name__}")


def output_coefficient(sensor, domain, mode: Mode, rule: Optional[QuadratureRule] = None) -> float:
    """
    传感器对单个模态的配对系数

    区域传感器为 ∫_D φ f，边界区域传感器为 ∫ γ₀φ·f，点传感器为 φ(b)，细丝为沿弧长的线积分。

    Raises:
        InvalidArgumentException: 支撑集或位置不在对应集合内
    """
    return float(_pairings(sensor, domain, [mode], rule)[0])


def coefficient_matrix(sensors: Sequence, basis: ModeBasis, rule: Optional[QuadratureRule] = None) -> np.ndarray:
    """
    输出系数矩阵 C，(i, m) 元为 output_coefficient(sensor_i, mode_m)

    Returns:
        q × M 矩阵，列顺序与截断基一致
    """
    if len(sensors) == 0:
        raise InvalidArgumentException("至少需要一个传感器")
    matrix = np.vstack([sensor_row(sensor, basis, rule) for sensor in sensors])
    logger.debug(f"输出系数矩阵: q={matrix.shape[0]}, M={matrix.shape[1]}")
    return matrix


@dataclass(frozen=True)
class OutputSamples:
    """输出采样 y_i(t_k)"""
    times: np.ndarray
    values: np.ndarray
    sensor_names: Tuple[str, ...]
    noise_sigma: float = 0.0
    noise_seed: Optional[int] = None

    def __post_init__(self):
        check_times(self.times)
        if self.values.shape != (len(self.sensor_names), self.times.size):
            raise InvalidArgumentException(
                f"输出维数 {self.values.shape} 与传感器数 {len(self.sensor_names)}、时刻数 {self.times.size} 不一致"
            )

    @property
    def sensor_count(self) -> int:
        return len(self.sensor_names)


def check_times(times: np.ndarray) -> None:
    if times.ndim != 1 or times.size == 0:
        raise InvalidArgumentException("采样时刻必须是非空一维序列")
    if not np.all(np.isfinite(times)) or times[0] < 0:
        raise InvalidArgumentException("采样时刻必须是有限的非负数")
    if np.any(np.diff(times) <= 0):
        raise InvalidArgumentException("采样时刻必须严格递增")


def uniform_times(start: float, end: float, count: int) -> np.ndarray:
    """时间窗内的均匀采样时刻"""
    if count < 1:
        raise InvalidArgumentException(f"采样点数必须 ≥ 1: {count}")
    if count == 1:
        return np.array([float(start)])
    return np.linspace(start, end, count)


def simulate_outputs(sensors: Sequence, basis: ModeBasis, x0_coefficients, times,
                     noise: Optional[Tuple[float, Optional[int]]] = None,
                     rule: Optional[QuadratureRule] = None,
                     matrix: Optional[np.ndarray] = None) -> OutputSamples:
    """
    模拟输出 y_i(t_k) = Σ_m c_{i,m} exp(λ_m t_k) x0_m，可叠加可复现的高斯噪声

    Args:
        sensors: 传感器组
        basis: 截断基
        x0_coefficients: 初始状态的模态系数（长度M）
        times: 严格递增的非负采样时刻
        noise: (σ, seed)，σ > 0 时 seed 必填
        rule: 求积规则
        matrix: 已计算好的输出系数矩阵（可选）

    Returns:
        OutputSamples
    """
    times = np.asarray(times, dtype=float)
    check_times(times)
    x0 = np.asarray(x0_coefficients, dtype=float)
    if x0.shape != (basis.size,):
        raise InvalidArgumentException(f"初始系数长度 {x0.shape} 与模态数 {basis.size} 不一致")

    coefficients = coefficient_matrix(sensors, basis, rule) if matrix is None else matrix
    values = coefficients @ (x0[:, None] * decay_matrix(basis, times).T)

    sigma, seed = (0.0, None) if noise is None else noise
    if sigma < 0:
        raise InvalidArgumentException(f"噪声标准差必须非负: {sigma}")
    if sigma > 0:
        if seed is None:
            raise InvalidArgumentException("噪声标准差大于0时必须给出种子")
        rng = np.random.default_rng(seed)
        values = values + sigma * rng.standard_normal(values.shape)

    return OutputSamples(
        times=times,
        values=values,
        sensor_names=tuple(sensor.name for sensor in sensors),
        noise_sigma=float(sigma),
        noise_seed=seed if sigma > 0 else None,
    )

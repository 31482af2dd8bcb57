"""
边界子区域上的迹与积分

Γ 的弧长参数从西南角（圆盘为 θ = 0）起逆时针沿各段依次累加；南、东边段内坐标递增，
北、西边段内坐标递减，使得整个 ∂Ω 的参数与逆时针方向一致。
"""
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from app.core.exceptions import InvalidArgumentException
from app.core.logging import get_logger
from app.models.geometry import (
    CONTAINMENT_TOLERANCE,
    BoundaryRegion,
    BoundarySegment,
    Coordinate,
    DiscDomain,
    Edge,
    PlanarSupport,
    RectangleDomain,
    segment_arc_scale,
    validate_region,
    validate_support,
)
from app.services.boundary.quadrature import QuadratureRule, resolve_rule
from app.services.spectral.modes import ModeBasis, ModeIndex, build_mode, mode_values

logger = get_logger(__name__)

REVERSED_EDGES = (Edge.NORTH, Edge.WEST)


def perimeter_position(domain, segment: BoundarySegment) -> float:
    """段起点在 ∂Ω 逆时针参数中的位置"""
    if isinstance(domain, DiscDomain):
        return float(segment.lo) * domain.a
    a1, a2 = domain.lengths
    if segment.edge == Edge.SOUTH:
        return float(segment.lo)
    if segment.edge == Edge.EAST:
        return a1 + float(segment.lo)
    if segment.edge == Edge.NORTH:
        return a1 + a2 + (a1 - float(segment.hi))
    return 2.0 * a1 + a2 + (a2 - float(segment.hi))


def ordered_segments(domain, region: BoundaryRegion) -> List[BoundarySegment]:
    return sorted(region.segments, key=lambda segment: perimeter_position(domain, segment))


def boundary_length(domain, region: BoundaryRegion) -> float:
    """
    Γ 的总长度（圆盘为 半径×角度）

    Args:
        domain: 区域
        region: 边界子区域
    """
    validate_region(domain, region)
    return float(sum(segment.coordinate_length() for segment in region.segments) * segment_arc_scale(domain))


def _edge_coordinate(segment: BoundarySegment, offset):
    if segment.edge in REVERSED_EDGES:
        return float(segment.hi) - offset
    return float(segment.lo) + offset


@dataclass(frozen=True)
class BoundaryPoint:
    """边界点：所在的边与边坐标（可附带Γ上的弧长坐标）"""
    edge: Edge
    coordinate: float
    arc_length: Optional[float] = None


def locate(domain, region: BoundaryRegion, s: float) -> BoundaryPoint:
    """把Γ上的弧长坐标 s 解析为具体的边与边坐标"""
    validate_region(domain, region)
    scale = segment_arc_scale(domain)
    total = boundary_length(domain, region)
    if s < 0 or s >= total:
        raise InvalidArgumentException(f"弧长坐标 {s} 超出 [0, {total})", details={"arc_length": s})
    offset = 0.0
    for segment in ordered_segments(domain, region):
        length = segment.coordinate_length() * scale
        if s < offset + length:
            return BoundaryPoint(segment.edge, float(_edge_coordinate(segment, (s - offset) / scale)), s)
        offset += length
    raise InvalidArgumentException(f"弧长坐标 {s} 无法解析到边界上")


@dataclass(frozen=True)
class RegionNodes:
    """Γ 上的求积节点"""
    arc_length: np.ndarray
    coordinate: np.ndarray
    u: np.ndarray
    v: np.ndarray
    weights: np.ndarray
    segment_ids: np.ndarray
    total_length: float

    @property
    def count(self) -> int:
        return int(self.weights.size)


def region_nodes(domain, region: BoundaryRegion, rule: Optional[QuadratureRule] = None) -> RegionNodes:
    """
    生成Γ上按弧长排序的求积节点

    Returns:
        RegionNodes（权重已乘弧长尺度）
    """
    validate_region(domain, region)
    rule = resolve_rule(rule)
    scale = segment_arc_scale(domain)

    arcs, coords, us, vs, weights, ids = [], [], [], [], [], []
    offset = 0.0
    for number, segment in enumerate(ordered_segments(domain, region)):
        length = segment.coordinate_length()
        local, local_weights = rule.interval(0.0, length)
        coordinate = _edge_coordinate(segment, local)
        u, v = domain.edge_point(segment.edge, coordinate)
        arcs.append(offset + local * scale)
        coords.append(coordinate)
        us.append(np.asarray(u, dtype=float))
        vs.append(np.asarray(v, dtype=float))
        weights.append(local_weights * scale)
        ids.append(np.full(local.size, number))
        offset += length * scale

    return RegionNodes(
        arc_length=np.concatenate(arcs),
        coordinate=np.concatenate(coords),
        u=np.concatenate(us),
        v=np.concatenate(vs),
        weights=np.concatenate(weights),
        segment_ids=np.concatenate(ids),
        total_length=offset,
    )


def trace_value(domain, index: ModeIndex, point: BoundaryPoint, radial_family: Optional[str] = None,
                normalization: Optional[str] = None) -> float:
    """
    特征函数在边界点处的迹 γ₀φ

    Args:
        domain: 区域
        index: 模态指标
        point: 边界点

    Returns:
        φ 在该边界点的值
    """
    if point.edge not in domain.edges:
        raise InvalidArgumentException(f"边 {point.edge.value} 不属于 {domain.kind} 区域")
    length = domain.edge_length(point.edge)
    if point.coordinate < -CONTAINMENT_TOLERANCE or point.coordinate > length + CONTAINMENT_TOLERANCE:
        raise InvalidArgumentException(
            f"边坐标 {point.coordinate} 超出边 {point.edge.value} 的范围 [0, {length}]",
            details={"edge": point.edge.value, "coordinate": point.coordinate},
        )
    mode = build_mode(domain, index, radial_family, normalization)
    u, v = domain.edge_point(point.edge, point.coordinate)
    return float(mode_values(domain, mode, u, v))


def mode_trace_matrix(basis: ModeBasis, nodes: RegionNodes) -> np.ndarray:
    """ψ_m 在节点处的值，形状 (节点数 × M)"""
    return np.column_stack([mode_values(basis.domain, mode, nodes.u, nodes.v) for mode in basis.modes])


def integrate_boundary(domain, region: BoundaryRegion, integrand: Callable[[np.ndarray], np.ndarray],
                       rule: Optional[QuadratureRule] = None) -> float:
    """
    Γ 上的积分，被积函数以Γ的弧长坐标 s 为自变量

    Args:
        domain: 区域
        region: 边界子区域
        integrand: s -> f(s)
        rule: 求积规则
    """
    nodes = region_nodes(domain, region, rule)
    return float(np.dot(nodes.weights, integrand(nodes.arc_length)))


def integrate_boundary_native(domain, region: BoundaryRegion, integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
                              rule: Optional[QuadratureRule] = None) -> float:
    """Γ 上的积分，被积函数以原生坐标 (u, v) 为自变量"""
    nodes = region_nodes(domain, region, rule)
    return float(np.dot(nodes.weights, integrand(nodes.u, nodes.v)))


def planar_nodes(domain, support: Optional[PlanarSupport], rule: Optional[QuadratureRule] = None
                 ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """平面支撑集上的张量积节点 (u, v, 权重)，圆盘权重含雅可比因子 r"""
    rule = resolve_rule(rule)
    if support is None:
        if isinstance(domain, RectangleDomain):
            (u_lo, u_hi), (v_lo, v_hi) = (0.0, float(domain.a1)), (0.0, float(domain.a2))
        else:
            (u_lo, u_hi), (v_lo, v_hi) = (0.0, domain.a), (0.0, 2.0 * np.pi)
    else:
        validate_support(domain, support)
        (u_lo, u_hi), (v_lo, v_hi) = support.bounds()

    u_nodes, u_weights = rule.interval(u_lo, u_hi)
    v_nodes, v_weights = rule.interval(v_lo, v_hi)
    u, v = np.meshgrid(u_nodes, v_nodes, indexing="ij")
    weights = np.outer(u_weights, v_weights)
    if isinstance(domain, DiscDomain):
        weights = weights * u
    return u.ravel(), v.ravel(), weights.ravel()


def integrate_planar(domain, support: Optional[PlanarSupport], integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
                     rule: Optional[QuadratureRule] = None) -> float:
    """
    平面支撑集（矩形片或圆盘扇区）上的积分

    Args:
        domain: 区域
        support: 原生坐标下的轴对齐盒；None 表示整个Ω
        integrand: (u, v) -> f(u, v)
        rule: 求积规则

    Raises:
        InvalidArgumentException: 支撑集不包含于Ω
    """
    u, v, weights = planar_nodes(domain, support, rule)
    return float(np.dot(weights, integrand(u, v)))


def restricted_mode_gram(basis: ModeBasis, region: BoundaryRegion, rule: Optional[QuadratureRule] = None) -> np.ndarray:
    """
    限制在Γ上的模态迹的Gram矩阵，(m, m′) 元为 ∫_Γ ψ_m ψ_m′

    Returns:
        对称的 M×M 矩阵
    """
    nodes = region_nodes(basis.domain, region, rule)
    traces = mode_trace_matrix(basis, nodes)
    gram = traces.T @ (nodes.weights[:, None] * traces)
    return 0.5 * (gram + gram.T)


def boundary_complement(domain, region: BoundaryRegion) -> Optional[BoundaryRegion]:
    """∂Ω \\ Γ 的边界段表示；Γ 覆盖整个边界时返回 None"""
    validate_region(domain, region)
    pieces: List[BoundarySegment] = []
    for edge in domain.edges:
        length = domain.edge_length(edge)
        if isinstance(domain, RectangleDomain):
            upper = domain.a1 if edge in (Edge.SOUTH, Edge.NORTH) else domain.a2
        else:
            upper = Coordinate.parse("2*pi")
        cursor = Coordinate.exact(0)
        for segment in sorted((s for s in region.segments if s.edge == edge), key=lambda s: float(s.lo)):
            if float(segment.lo) - float(cursor) > CONTAINMENT_TOLERANCE * max(1.0, length):
                pieces.append(BoundarySegment(edge=edge, lo=cursor, hi=segment.lo))
            if float(segment.hi) > float(cursor):
                cursor = segment.hi
        if length - float(cursor) > CONTAINMENT_TOLERANCE * max(1.0, length):
            pieces.append(BoundarySegment(edge=edge, lo=cursor, hi=upper))
    if not pieces:
        return None
    return BoundaryRegion(segments=tuple(pieces))


def restriction_norms(domain, region: BoundaryRegion, g: Callable[[np.ndarray, np.ndarray], np.ndarray],
                      rule: Optional[QuadratureRule] = None) -> Tuple[float, float]:
    """
    边界函数 g 在Γ与∂Ω上的L²范数

    ∂Ω 上的平方积分按 Γ 加补集计算，因此 Γ 范数不超过 ∂Ω 范数在浮点意义下也严格成立。

    Returns:
        (‖g‖_{L²(Γ)}, ‖g‖_{L²(∂Ω)})
    """
    gamma_squared = integrate_boundary_native(domain, region, lambda u, v: np.asarray(g(u, v)) ** 2, rule)
    complement = boundary_complement(domain, region)
    rest_squared = 0.0
    if complement is not None:
        rest_squared = integrate_boundary_native(domain, complement, lambda u, v: np.asarray(g(u, v)) ** 2, rule)
    return float(np.sqrt(gamma_squared)), float(np.sqrt(gamma_squared + rest_squared))

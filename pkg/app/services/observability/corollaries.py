"""
放置推论检验

每条推论把传感器位置化为比值 x，并要求 k·x ∉ ℕ（k = 1..J，ℕ 含0）。
精确有理坐标给出确定结论；浮点坐标用分母不超过上限的最佳有理逼近，结果标记为参考。
推论是校验器，不是判定依据：分析报告把它们与核检验并列，并列出不一致。
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.exceptions import InvalidArgumentException
from app.core.logging import get_logger
from app.models.geometry import (
    Coordinate,
    DiscDomain,
    Edge,
    RectangleDomain,
    coordinate_ratio,
    validate_boundary_point,
)
from app.models.sensor import (
    BoundaryPointwise,
    BoundaryZone,
    Filament,
    InternalPointwise,
    InternalZone,
    SymmetricBump,
    Tabulated,
    is_symmetric_about,
)

logger = get_logger(__name__)

RULES: Tuple[str, ...] = ("4.1", "4.2", "4.3", "4.4", "4.5", "4.6", "4.7", "4.8", "4.9", "4.10")
PI = Coordinate.exact(1, pi_multiple=True)


@dataclass(frozen=True)
class CorollaryOutcome:
    """推论检验结果"""
    rule: str
    passed: bool
    witness: Optional[List[int]] = None
    exact: bool = True
    detail: str = ""
    conditions: List[str] = field(default_factory=list)

    @property
    def advisory(self) -> bool:
        return not self.exact


@dataclass(frozen=True)
class _Condition:
    """单个算术条件 k·(numerator/denominator) ∉ ℕ"""
    label: str
    numerator: Coordinate
    denominator: Coordinate
    scale_with_index: bool = True


def _in_naturals(value: Fraction) -> bool:
    return value.denominator == 1 and value >= 0


def _evaluate(rule: str, conditions: Sequence[_Condition], bound: int, max_denominator: int) -> CorollaryOutcome:
    exact = True
    described = []
    for condition in conditions:
        ratio, is_exact = coordinate_ratio(condition.numerator, condition.denominator, max_denominator)
        exact = exact and is_exact
        described.append(f"{condition.label} = {ratio if ratio is not None else 'irrational'}")
        if ratio is None:
            continue
        indices = range(1, bound + 1) if condition.scale_with_index else (1,)
        for k in indices:
            if _in_naturals(k * ratio):
                detail = f"{k}·{condition.label} = {k * ratio} ∈ ℕ"
                return CorollaryOutcome(rule, False, [k], exact, detail, described)
    return CorollaryOutcome(rule, True, None, exact, "所有条件均满足 ∉ ℕ", described)


def _require_rectangle(rule: str, domain) -> RectangleDomain:
    if not isinstance(domain, RectangleDomain):
        raise InvalidArgumentException(f"推论 {rule} 只适用于矩形区域")
    return domain


def _require_disc(rule: str, domain) -> DiscDomain:
    if not isinstance(domain, DiscDomain):
        raise InvalidArgumentException(f"推论 {rule} 只适用于圆盘区域")
    return domain


def _single(rule: str, sensors: Sequence, kind):
    if len(sensors) != 1 or not isinstance(sensors[0], kind):
        raise InvalidArgumentException(f"推论 {rule} 需要恰好一个 {kind.__name__} 传感器")
    return sensors[0]


def _pair(rule: str, sensors: Sequence, kind):
    if len(sensors) != 2 or not all(isinstance(sensor, kind) for sensor in sensors):
        raise InvalidArgumentException(f"推论 {rule} 需要恰好两个 {kind.__name__} 传感器")
    return sensors[0], sensors[1]


def _require_symmetric(rule: str, sensor, axis: int, center: Coordinate, support: Tuple[float, float]) -> None:
    distribution = sensor.distribution
    if isinstance(distribution, Tabulated) and distribution.axis != axis:
        return
    if isinstance(distribution, SymmetricBump) and axis >= distribution.dimension:
        return
    if not is_symmetric_about(distribution, axis, float(center), support):
        raise InvalidArgumentException(
            f"推论 {rule} 要求分布关于 {float(center)} 对称，传感器 {sensor.name} 不满足",
            details={"sensor": sensor.name, "axis": axis},
        )


def _angle_difference(first: Coordinate, second: Coordinate) -> Coordinate:
    difference = first - second
    return -difference if float(difference) < 0 else difference


def _conditions_41(domain, sensors) -> List[_Condition]:
    rectangle = _require_rectangle("4.1", domain)
    sensor = _single("4.1", sensors, InternalZone)
    center = sensor.support.center
    bounds = sensor.support.bounds()
    for axis in range(2):
        _require_symmetric("4.1", sensor, axis, center[axis], bounds[axis])
    return [
        _Condition("ξ01/a1", center[0], rectangle.a1),
        _Condition("ξ02/a2", center[1], rectangle.a2),
    ]


def _edge_extent(rectangle: RectangleDomain, edge: Edge) -> Coordinate:
    return rectangle.a1 if edge in (Edge.SOUTH, Edge.NORTH) else rectangle.a2


def _conditions_42(domain, sensors) -> List[_Condition]:
    rectangle = _require_rectangle("4.2", domain)
    sensor = _single("4.2", sensors, BoundaryZone)
    if len(sensor.support.segments) != 1:
        raise InvalidArgumentException("推论 4.2 需要单段边界区域传感器")
    segment = sensor.support.segments[0]
    _require_symmetric("4.2", sensor, 0, segment.center, (float(segment.lo), float(segment.hi)))
    return [_Condition("η01/a", segment.center, _edge_extent(rectangle, segment.edge))]


def _conditions_43(domain, sensors) -> List[_Condition]:
    rectangle = _require_rectangle("4.3", domain)
    sensor = _single("4.3", sensors, BoundaryZone)
    segments = sensor.support.segments
    horizontal = [s for s in segments if s.edge in (Edge.SOUTH, Edge.NORTH)]
    vertical = [s for s in segments if s.edge in (Edge.EAST, Edge.WEST)]
    if len(segments) != 2 or len(horizontal) != 1 or len(vertical) != 1:
        raise InvalidArgumentException("推论 4.3 需要一段水平边与一段竖直边组成的边界区域传感器")
    for segment in (horizontal[0], vertical[0]):
        _require_symmetric("4.3", sensor, 0, segment.center, (float(segment.lo), float(segment.hi)))
    return [
        _Condition("η̄01/a1", horizontal[0].center, rectangle.a1),
        _Condition("η̄02/a2", vertical[0].center, rectangle.a2),
    ]


def _conditions_44(domain, sensors) -> List[_Condition]:
    _require_disc("4.4", domain)
    first, second = _pair("4.4", sensors, InternalZone)
    difference = _angle_difference(first.support.center[1], second.support.center[1])
    return [_Condition("(θ1−θ2)/π", difference, PI)]


def _arc_center(rule: str, sensor: BoundaryZone) -> Coordinate:
    if len(sensor.support.segments) != 1:
        raise InvalidArgumentException(f"推论 {rule} 需要单段圆弧传感器")
    return sensor.support.segments[0].center


def _conditions_45(domain, sensors) -> List[_Condition]:
    _require_disc("4.5", domain)
    first, second = _pair("4.5", sensors, BoundaryZone)
    difference = _angle_difference(_arc_center("4.5", first), _arc_center("4.5", second))
    return [_Condition("(θ1−θ2)/π", difference, PI)]


def _conditions_46(domain, sensors) -> List[_Condition]:
    rectangle = _require_rectangle("4.6", domain)
    sensor = _single("4.6", sensors, InternalPointwise)
    return [
        _Condition("b1/a1", sensor.location[0], rectangle.a1),
        _Condition("b2/a2", sensor.location[1], rectangle.a2),
    ]


def _conditions_47(domain, sensors) -> List[_Condition]:
    rectangle = _require_rectangle("4.7", domain)
    sensor = _single("4.7", sensors, Filament)
    midpoint = sensor.midpoint
    # 条件 i·b/(i·a) 与i无关
    return [
        _Condition("b1/a1", midpoint[0], rectangle.a1, scale_with_index=False),
        _Condition("b2/a2", midpoint[1], rectangle.a2, scale_with_index=False),
    ]


def _conditions_48(domain, sensors) -> List[_Condition]:
    rectangle = _require_rectangle("4.8", domain)
    sensor = _single("4.8", sensors, BoundaryPointwise)
    edge = validate_boundary_point(rectangle, sensor.location)
    if edge in (Edge.EAST, Edge.WEST):
        return [_Condition("b2/a2", sensor.location[1], rectangle.a2)]
    return [_Condition("b1/a1", sensor.location[0], rectangle.a1)]


def _conditions_49(domain, sensors) -> List[_Condition]:
    _require_disc("4.9", domain)
    first, second = _pair("4.9", sensors, InternalPointwise)
    return [_Condition("(θ1−θ2)/π", _angle_difference(first.location[1], second.location[1]), PI)]


def _conditions_410(domain, sensors) -> List[_Condition]:
    _require_disc("4.10", domain)
    first, second = _pair("4.10", sensors, BoundaryPointwise)
    return [_Condition("(θ1−θ2)/π", _angle_difference(first.location[1], second.location[1]), PI)]


_RULE_CONDITIONS: Dict[str, Callable] = {
    "4.1": _conditions_41,
    "4.2": _conditions_42,
    "4.3": _conditions_43,
    "4.4": _conditions_44,
    "4.5": _conditions_45,
    "4.6": _conditions_46,
    "4.7": _conditions_47,
    "4.8": _conditions_48,
    "4.9": _conditions_49,
    "4.10": _conditions_410,
}


def corollary_check(rule: str, sensors: Sequence, domain, bound: int,
                    max_denominator: Optional[int] = None) -> CorollaryOutcome:
    """
    检验一条放置推论的算术条件

    Args:
        rule: 推论编号（"4.1" .. "4.10"）
        sensors: 传感器组
        domain: 区域
        bound: 模态上界J
        max_denominator: 浮点坐标有理逼近的最大分母

    Returns:
        CorollaryOutcome，失败时给出第一个违反条件的指标

    Raises:
        InvalidArgumentException: 推论与传感器类型、数量或区域不匹配
    """
    if rule not in _RULE_CONDITIONS:
        raise InvalidArgumentException(f"未知的推论编号: {rule}")
    if bound < 1:
        raise InvalidArgumentException(f"模态上界J必须 ≥ 1: {bound}")
    max_denominator = max_denominator or settings.RATIONAL_MAX_DENOMINATOR
    conditions = _RULE_CONDITIONS[rule](domain, sensors)
    outcome = _evaluate(rule, conditions, bound, max_denominator)
    if outcome.advisory:
        logger.warning(f"推论 {rule} 基于浮点坐标的有理逼近，结果仅供参考")
    return outcome


def applicable_rules(domain, sensors: Sequence) -> List[str]:
    """适用于该传感器组的推论（类型、数量、区域与对称性均匹配）"""
    found = []
    for rule in RULES:
        try:
            _RULE_CONDITIONS[rule](domain, sensors)
        except InvalidArgumentException:
            continue
        found.append(rule)
    return found


def check_applicable(domain, sensors: Sequence, bound: int, max_denominator: Optional[int] = None) -> List[CorollaryOutcome]:
    """检验所有适用推论"""
    return [corollary_check(rule, sensors, domain, bound, max_denominator) for rule in applicable_rules(domain, sensors)]

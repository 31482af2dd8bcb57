"""
几何数据模型 - 精确坐标、区域、平面支撑集与边界子区域
"""
import math
import re
from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_core import core_schema

from app.core.exceptions import InvalidArgumentException

TWO_PI = 2.0 * math.pi
CONTAINMENT_TOLERANCE = 1e-12

_PI_PATTERN = re.compile(r"^(?P<sign>[+-]?)\s*(?P<coef>\d+(?:/\d+)?)?\s*\*?\s*pi$")


class Coordinate:
    """
    几何坐标值

    浮点数是近似值；字符串 "p/q" 保存为精确有理数，"p/q*pi" 保存为π的精确有理倍数。
    判断 "∈ ℕ" 的推论检验依赖精确值。
    """

    __slots__ = ("value", "ratio", "pi_multiple")

    def __init__(self, value: float, ratio: Optional[Fraction] = None, pi_multiple: bool = False):
        if not math.isfinite(value):
            raise ValueError(f"坐标必须是有限数: {value}")
        self.value = float(value)
        self.ratio = ratio
        self.pi_multiple = pi_multiple

    @classmethod
    def exact(cls, ratio: Union[int, Fraction], pi_multiple: bool = False) -> "Coordinate":
        ratio = Fraction(ratio)
        scale = math.pi if pi_multiple else 1.0
        return cls(float(ratio) * scale, ratio, pi_multiple)

    @classmethod
    def parse(cls, raw: Any) -> "Coordinate":
        """从数字或字符串解析坐标"""
        if isinstance(raw, Coordinate):
            return raw
        if isinstance(raw, bool):
            raise ValueError("坐标不能是布尔值")
        if isinstance(raw, int):
            return cls.exact(raw)
        if isinstance(raw, Fraction):
            return cls.exact(raw)
        if isinstance(raw, float):
            return cls(raw)
        if isinstance(raw, str):
            text = raw.strip().lower()
            match = _PI_PATTERN.match(text)
            if match:
                ratio = Fraction(match.group("coef") or 1)
                if match.group("sign") == "-":
                    ratio = -ratio
                return cls.exact(ratio, pi_multiple=True)
            try:
                return cls.exact(Fraction(text))
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"无法解析的坐标: {raw!r}（支持数字、\"p/q\" 或 \"p/q*pi\"）")
        raise ValueError(f"无法解析的坐标类型: {type(raw).__name__}")

    @classmethod
    def __get_pydantic_core_schema__(cls, source_type, handler):
        return core_schema.no_info_plain_validator_function(
            cls.parse,
            serialization=core_schema.plain_serializer_function_ser_schema(lambda c: c.to_json()),
        )

    @property
    def is_exact(self) -> bool:
        return self.ratio is not None

    def to_json(self) -> Union[str, float]:
        if self.ratio is None:
            return self.value
        if self.pi_multiple:
            if self.ratio == 1:
                return "pi"
            return f"{self.ratio}*pi"
        return str(self.ratio)

    def __float__(self) -> float:
        return self.value

    def _is_zero(self) -> bool:
        return self.is_exact and self.ratio == 0

    def __neg__(self) -> "Coordinate":
        return self.scaled(Fraction(-1))

    def __sub__(self, other: "Coordinate") -> "Coordinate":
        if other._is_zero():
            return self
        if self._is_zero():
            return -other
        if self.is_exact and other.is_exact and self.pi_multiple == other.pi_multiple:
            return Coordinate.exact(self.ratio - other.ratio, self.pi_multiple)
        return Coordinate(self.value - other.value)

    def __add__(self, other: "Coordinate") -> "Coordinate":
        if other._is_zero():
            return self
        if self._is_zero():
            return other
        if self.is_exact and other.is_exact and self.pi_multiple == other.pi_multiple:
            return Coordinate.exact(self.ratio + other.ratio, self.pi_multiple)
        return Coordinate(self.value + other.value)

    def scaled(self, factor: Fraction) -> "Coordinate":
        """乘以精确有理因子"""
        if self.is_exact:
            return Coordinate.exact(self.ratio * factor, self.pi_multiple)
        return Coordinate(self.value * float(factor))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Coordinate):
            return NotImplemented
        return (self.value, self.ratio, self.pi_multiple) == (other.value, other.ratio, other.pi_multiple)

    def __hash__(self) -> int:
        return hash((self.value, self.ratio, self.pi_multiple))

    def __repr__(self) -> str:
        return f"Coordinate({self.to_json()!r})"


def coordinate_ratio(numerator: Coordinate, denominator: Coordinate, max_denominator: int) -> Tuple[Optional[Fraction], bool]:
    """
    计算两个坐标之比的有理表示

    Returns:
        (比值, 是否精确)。比值为 None 表示比值精确地是无理数。
    """
    if numerator.is_exact and denominator.is_exact:
        if numerator.ratio == 0:
            return Fraction(0), True
        if numerator.pi_multiple == denominator.pi_multiple:
            return numerator.ratio / denominator.ratio, True
        return None, True
    approx = Fraction(numerator.value / denominator.value).limit_denominator(max_denominator)
    return approx, False


class Edge(str, Enum):
    """边界段所在的边"""
    SOUTH = "south"
    EAST = "east"
    NORTH = "north"
    WEST = "west"
    CIRCLE = "circle"


RECTANGLE_EDGES = (Edge.SOUTH, Edge.EAST, Edge.NORTH, Edge.WEST)


class RectangleDomain(BaseModel):
    """矩形区域 Ω = [0, a1] × [0, a2]"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["rectangle"] = Field(default="rectangle", description="区域类型")
    a1: Coordinate = Field(description="ξ1方向边长")
    a2: Coordinate = Field(description="ξ2方向边长")

    @field_validator("a1", "a2")
    @classmethod
    def _positive(cls, value: Coordinate) -> Coordinate:
        if value.value <= 0:
            raise ValueError("矩形边长必须为正")
        return value

    @property
    def lengths(self) -> Tuple[float, float]:
        return float(self.a1), float(self.a2)

    @property
    def area(self) -> float:
        return float(self.a1) * float(self.a2)

    @property
    def perimeter(self) -> float:
        return 2.0 * (float(self.a1) + float(self.a2))

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return RECTANGLE_EDGES

    def edge_length(self, edge: Edge) -> float:
        if edge in (Edge.SOUTH, Edge.NORTH):
            return float(self.a1)
        if edge in (Edge.EAST, Edge.WEST):
            return float(self.a2)
        raise InvalidArgumentException(f"矩形区域没有边 {edge.value}")

    def edge_point(self, edge: Edge, coordinate):
        """边坐标（南北边为ξ1，东西边为ξ2）对应的原生坐标"""
        a1, a2 = self.lengths
        if edge == Edge.SOUTH:
            return coordinate, coordinate * 0.0
        if edge == Edge.EAST:
            return coordinate * 0.0 + a1, coordinate
        if edge == Edge.NORTH:
            return coordinate, coordinate * 0.0 + a2
        if edge == Edge.WEST:
            return coordinate * 0.0, coordinate
        raise InvalidArgumentException(f"矩形区域没有边 {edge.value}")

    def contains(self, u: float, v: float, tol: float = CONTAINMENT_TOLERANCE) -> bool:
        a1, a2 = self.lengths
        return -tol <= u <= a1 + tol and -tol <= v <= a2 + tol

    def boundary_edges_at(self, u: float, v: float, tol: float = 1e-9) -> List[Edge]:
        """点所在的边（角点属于两条边）"""
        a1, a2 = self.lengths
        if not self.contains(u, v, tol):
            return []
        found = []
        if abs(v) <= tol:
            found.append(Edge.SOUTH)
        if abs(u - a1) <= tol:
            found.append(Edge.EAST)
        if abs(v - a2) <= tol:
            found.append(Edge.NORTH)
        if abs(u) <= tol:
            found.append(Edge.WEST)
        return found

    def to_cartesian(self, u, v):
        return u, v

    def from_cartesian(self, x, y):
        return x, y


class DiscDomain(BaseModel):
    """圆盘区域（圆心在原点，原生坐标为极坐标 (r, θ)）"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["disc"] = Field(default="disc", description="区域类型")
    radius: Coordinate = Field(description="半径")

    @field_validator("radius")
    @classmethod
    def _positive(cls, value: Coordinate) -> Coordinate:
        if value.value <= 0:
            raise ValueError("圆盘半径必须为正")
        return value

    @property
    def a(self) -> float:
        return float(self.radius)

    @property
    def area(self) -> float:
        return math.pi * self.a ** 2

    @property
    def perimeter(self) -> float:
        return TWO_PI * self.a

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return (Edge.CIRCLE,)

    def edge_length(self, edge: Edge) -> float:
        if edge != Edge.CIRCLE:
            raise InvalidArgumentException(f"圆盘区域没有边 {edge.value}")
        return TWO_PI

    def edge_point(self, edge: Edge, coordinate):
        if edge != Edge.CIRCLE:
            raise InvalidArgumentException(f"圆盘区域没有边 {edge.value}")
        return coordinate * 0.0 + self.a, coordinate

    def contains(self, u: float, v: float, tol: float = CONTAINMENT_TOLERANCE) -> bool:
        return -tol <= u <= self.a + tol

    def boundary_edges_at(self, u: float, v: float, tol: float = 1e-9) -> List[Edge]:
        if abs(u - self.a) <= tol:
            return [Edge.CIRCLE]
        return []

    def to_cartesian(self, u, v):
        return u * np.cos(v), u * np.sin(v)

    def from_cartesian(self, x, y):
        r = np.hypot(x, y)
        theta = np.mod(np.arctan2(y, x), TWO_PI)
        return r, theta


Domain = Annotated[Union[RectangleDomain, DiscDomain], Field(discriminator="kind")]


class PlanarSupport(BaseModel):
    """平面支撑集：原生坐标下的轴对齐盒（矩形片或圆盘扇区）"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    lo: Tuple[Coordinate, Coordinate] = Field(description="下界 (ξ1, ξ2) 或 (r, θ)")
    hi: Tuple[Coordinate, Coordinate] = Field(description="上界 (ξ1, ξ2) 或 (r, θ)")

    @model_validator(mode="after")
    def _ordered(self) -> "PlanarSupport":
        for axis in range(2):
            if not self.lo[axis].value < self.hi[axis].value:
                raise ValueError(f"支撑集第{axis + 1}维下界必须小于上界")
        return self

    @property
    def center(self) -> Tuple[Coordinate, Coordinate]:
        half = Fraction(1, 2)
        return (
            (self.lo[0] + self.hi[0]).scaled(half),
            (self.lo[1] + self.hi[1]).scaled(half),
        )

    def bounds(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        return (
            (float(self.lo[0]), float(self.hi[0])),
            (float(self.lo[1]), float(self.hi[1])),
        )


def validate_support(domain, support: PlanarSupport) -> None:
    """检查平面支撑集包含于 Ω"""
    (u_lo, u_hi), (v_lo, v_hi) = support.bounds()
    tol = CONTAINMENT_TOLERANCE
    if isinstance(domain, RectangleDomain):
        a1, a2 = domain.lengths
        if u_lo < -tol or u_hi > a1 + tol or v_lo < -tol or v_hi > a2 + tol:
            raise InvalidArgumentException("支撑集不包含于Ω (support outside Ω)", details={"support": support.model_dump(mode="json")})
    else:
        if u_lo < -tol or u_hi > domain.a + tol:
            raise InvalidArgumentException("扇区半径超出圆盘 (support outside Ω)", details={"support": support.model_dump(mode="json")})
        if v_lo < -tol or v_hi - v_lo > TWO_PI + tol:
            raise InvalidArgumentException("扇区角度范围不合法 (support outside Ω)", details={"support": support.model_dump(mode="json")})


class BoundarySegment(BaseModel):
    """边界段：某条边上的半开区间 [lo, hi)，以该边的坐标度量"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    edge: Edge = Field(description="所在的边")
    lo: Coordinate = Field(description="区间下端（边坐标）")
    hi: Coordinate = Field(description="区间上端（边坐标）")

    @model_validator(mode="after")
    def _ordered(self) -> "BoundarySegment":
        if not self.lo.value < self.hi.value:
            raise ValueError(f"边界段 {self.edge.value} 的下端必须小于上端")
        return self

    @property
    def center(self) -> Coordinate:
        return (self.lo + self.hi).scaled(Fraction(1, 2))

    def coordinate_length(self) -> float:
        return float(self.hi) - float(self.lo)


class BoundaryRegion(BaseModel):
    """边界子区域 Γ ⊆ ∂Ω，由互不相交的边界段组成"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    segments: Tuple[BoundarySegment, ...] = Field(description="边界段列表")

    @field_validator("segments")
    @classmethod
    def _non_empty(cls, value):
        if len(value) == 0:
            raise ValueError("边界子区域至少需要一个边界段")
        return value

    @classmethod
    def single(cls, edge: Union[Edge, str], lo, hi) -> "BoundaryRegion":
        return cls(segments=(BoundarySegment(edge=Edge(edge), lo=Coordinate.parse(lo), hi=Coordinate.parse(hi)),))

    @classmethod
    def full(cls, domain) -> "BoundaryRegion":
        """整个边界 ∂Ω"""
        if isinstance(domain, RectangleDomain):
            segments = []
            for edge in RECTANGLE_EDGES:
                upper = domain.a1 if edge in (Edge.SOUTH, Edge.NORTH) else domain.a2
                segments.append(BoundarySegment(edge=edge, lo=Coordinate.exact(0), hi=upper))
            return cls(segments=tuple(segments))
        return cls.single(Edge.CIRCLE, 0, "2*pi")


def segment_arc_scale(domain) -> float:
    """边坐标到弧长的比例（矩形为1，圆盘为半径）"""
    return domain.a if isinstance(domain, DiscDomain) else 1.0


def validate_region(domain, region: BoundaryRegion) -> None:
    """检查边界子区域与区域匹配、位于边内且互不相交"""
    tol = CONTAINMENT_TOLERANCE
    by_edge = {}
    for segment in region.segments:
        if segment.edge not in domain.edges:
            raise InvalidArgumentException(
                f"边 {segment.edge.value} 不属于 {domain.kind} 区域",
                details={"segment": segment.model_dump(mode="json")},
            )
        length = domain.edge_length(segment.edge)
        if float(segment.lo) < -tol or float(segment.hi) > length + tol:
            raise InvalidArgumentException(
                f"边界段 [{float(segment.lo)}, {float(segment.hi)}) 超出边 {segment.edge.value} 的范围 [0, {length}]",
                details={"segment": segment.model_dump(mode="json")},
            )
        by_edge.setdefault(segment.edge, []).append(segment)

    for edge, segments in by_edge.items():
        ordered = sorted(segments, key=lambda s: float(s.lo))
        for left, right in zip(ordered, ordered[1:]):
            if float(right.lo) < float(left.hi) - tol:
                raise InvalidArgumentException(
                    f"边 {edge.value} 上的边界段相互重叠",
                    details={"left": left.model_dump(mode="json"), "right": right.model_dump(mode="json")},
                )

    total = sum(s.coordinate_length() for s in region.segments) * segment_arc_scale(domain)
    if total <= 0:
        raise InvalidArgumentException("边界子区域长度必须为正")


def validate_domain_point(domain, point: Tuple[Coordinate, Coordinate]) -> None:
    """检查点位于 Ω 的闭包内"""
    u, v = float(point[0]), float(point[1])
    if not domain.contains(u, v):
        raise InvalidArgumentException(
            f"位置 ({u}, {v}) 在Ω之外 (location outside Ω)",
            details={"point": [u, v]},
        )


def validate_boundary_point(domain, point: Tuple[Coordinate, Coordinate]) -> Edge:
    """检查点位于 ∂Ω 上，返回其所在的边"""
    validate_domain_point(domain, point)
    edges = domain.boundary_edges_at(float(point[0]), float(point[1]))
    if not edges:
        raise InvalidArgumentException(
            f"位置 ({float(point[0])}, {float(point[1])}) 不在边界∂Ω上 (location not on ∂Ω)",
            details={"point": [float(point[0]), float(point[1])]},
        )
    return edges[0]

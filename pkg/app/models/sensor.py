"""
传感器数据模型 - 空间分布与五类传感器
"""
from fractions import Fraction
from typing import Annotated, List, Literal, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.geometry import BoundaryRegion, Coordinate, PlanarSupport


class _FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# ======================
# 空间分布
# ======================

class Uniform(_FrozenModel):
    """常值分布 f ≡ amplitude"""
    type: Literal["uniform"] = Field(default="uniform", description="分布类型")
    amplitude: float = Field(default=1.0, description="幅值")

    @property
    def dimension(self) -> int:
        return 0

    def evaluate(self, coords: Sequence[np.ndarray]) -> np.ndarray:
        return np.full_like(np.asarray(coords[0], dtype=float), self.amplitude)

    def scaled(self, factor: float) -> "Uniform":
        return self.model_copy(update={"amplitude": self.amplitude * factor})


class CosineTerm(_FrozenModel):
    """余弦项 amplitude·cos(frequency·π·coord[axis])"""
    axis: int = Field(default=0, ge=0, le=1, description="坐标轴（边界与细丝传感器只能为0）")
    frequency: float = Field(description="频率（以π为单位）")
    amplitude: float = Field(default=1.0, description="幅值")


class CosineProfile(_FrozenModel):
    """余弦分布 f = Σ amplitude·cos(frequency·π·coord[axis])"""
    type: Literal["cosine"] = Field(default="cosine", description="分布类型")
    terms: Tuple[CosineTerm, ...] = Field(description="余弦项列表")

    @field_validator("terms")
    @classmethod
    def _non_empty(cls, value):
        if len(value) == 0:
            raise ValueError("余弦分布至少需要一项")
        return value

    @property
    def dimension(self) -> int:
        return max(term.axis for term in self.terms) + 1

    def evaluate(self, coords: Sequence[np.ndarray]) -> np.ndarray:
        total = np.zeros_like(np.asarray(coords[0], dtype=float))
        for term in self.terms:
            total = total + term.amplitude * np.cos(term.frequency * np.pi * np.asarray(coords[term.axis], dtype=float))
        return total

    def scaled(self, factor: float) -> "CosineProfile":
        terms = tuple(term.model_copy(update={"amplitude": term.amplitude * factor}) for term in self.terms)
        return self.model_copy(update={"terms": terms})


class SymmetricBump(_FrozenModel):
    """
    归一化余弦鼓包，关于中心偶对称

    每一维取 (1 + cos(π(u − c)/h)) / (2h)，|u − c| < h，其余为0；各维乘积的积分为1。
    """
    type: Literal["bump"] = Field(default="bump", description="分布类型")
    center: Tuple[Coordinate, ...] = Field(description="中心（每维一个坐标）")
    half_width: Tuple[float, ...] = Field(description="半宽（每维一个正数）")
    amplitude: float = Field(default=1.0, description="幅值（为1时积分为1）")

    @model_validator(mode="after")
    def _check_shape(self) -> "SymmetricBump":
        if len(self.center) == 0 or len(self.center) > 2:
            raise ValueError("鼓包中心必须是1维或2维")
        if len(self.center) != len(self.half_width):
            raise ValueError("鼓包中心与半宽维数不一致")
        if any(h <= 0 for h in self.half_width):
            raise ValueError("鼓包半宽必须为正 (half-width positive)")
        return self

    @property
    def dimension(self) -> int:
        return len(self.center)

    def evaluate(self, coords: Sequence[np.ndarray]) -> np.ndarray:
        result = np.full_like(np.asarray(coords[0], dtype=float), self.amplitude)
        for axis, (center, half) in enumerate(zip(self.center, self.half_width)):
            offset = np.asarray(coords[axis], dtype=float) - float(center)
            inside = np.abs(offset) < half
            result = result * np.where(inside, (1.0 + np.cos(np.pi * offset / half)) / (2.0 * half), 0.0)
        return result

    def scaled(self, factor: float) -> "SymmetricBump":
        return self.model_copy(update={"amplitude": self.amplitude * factor})


class Tabulated(_FrozenModel):
    """表格分布，沿某一坐标轴线性插值"""
    type: Literal["tabulated"] = Field(default="tabulated", description="分布类型")
    axis: int = Field(default=0, ge=0, le=1, description="插值所沿的坐标轴")
    positions: Tuple[float, ...] = Field(description="采样位置（严格递增）")
    values: Tuple[float, ...] = Field(description="采样值")

    @model_validator(mode="after")
    def _check_samples(self) -> "Tabulated":
        if len(self.positions) < 2:
            raise ValueError("表格分布至少需要两个采样点")
        if len(self.positions) != len(self.values):
            raise ValueError("采样位置与采样值数量不一致")
        if any(b <= a for a, b in zip(self.positions, self.positions[1:])):
            raise ValueError("采样位置必须严格递增")
        return self

    @property
    def dimension(self) -> int:
        return self.axis + 1

    def covers(self, lo: float, hi: float, tol: float = 1e-12) -> bool:
        return self.positions[0] <= lo + tol and self.positions[-1] >= hi - tol

    def evaluate(self, coords: Sequence[np.ndarray]) -> np.ndarray:
        return np.interp(np.asarray(coords[self.axis], dtype=float), self.positions, self.values)

    def scaled(self, factor: float) -> "Tabulated":
        return self.model_copy(update={"values": tuple(v * factor for v in self.values)})


Distribution = Annotated[Union[Uniform, CosineProfile, SymmetricBump, Tabulated], Field(discriminator="type")]


def is_symmetric_about(distribution, axis: int, center: float, support: Tuple[float, float], tol: float = 1e-10) -> bool:
    """
    判断分布在给定轴上是否关于 center 偶对称

    Args:
        distribution: 空间分布
        axis: 坐标轴
        center: 对称中心
        support: 该轴上的支撑区间
    """
    if isinstance(distribution, Uniform):
        return True
    if isinstance(distribution, SymmetricBump):
        if axis >= distribution.dimension:
            return True
        return abs(float(distribution.center[axis]) - center) <= tol
    if isinstance(distribution, CosineProfile):
        for term in distribution.terms:
            if term.axis != axis:
                continue
            # cos(kπ(c + d)) = cos(kπ(c − d)) 对所有d成立当且仅当 sin(kπc) = 0
            if abs(np.sin(term.frequency * np.pi * center)) > tol:
                return False
        return True

    # 表格分布：镜像采样比对
    lo, hi = support
    half = min(center - lo, hi - center)
    if half <= 0:
        return False
    offsets = np.linspace(0.0, half, 65)
    points = [np.zeros_like(offsets), np.zeros_like(offsets)]
    mirrored = [np.zeros_like(offsets), np.zeros_like(offsets)]
    points[axis] = center + offsets
    mirrored[axis] = center - offsets
    return bool(np.allclose(distribution.evaluate(points), distribution.evaluate(mirrored), atol=tol))


# ======================
# 传感器
# ======================

Point = Tuple[Coordinate, Coordinate]


class InternalZone(_FrozenModel):
    """内部区域传感器 (D, f)，D 为原生坐标下的轴对齐盒"""
    kind: Literal["internal_zone"] = Field(default="internal_zone", description="传感器类型")
    name: str = Field(description="传感器标识")
    support: PlanarSupport = Field(description="测量支撑集 D")
    distribution: Distribution = Field(default_factory=Uniform, description="空间分布 f")


class BoundaryZone(_FrozenModel):
    """边界区域传感器 (Γ_i, f)，f 是边坐标的函数"""
    kind: Literal["boundary_zone"] = Field(default="boundary_zone", description="传感器类型")
    name: str = Field(description="传感器标识")
    support: BoundaryRegion = Field(description="边界支撑集")
    distribution: Distribution = Field(default_factory=Uniform, description="空间分布 f（边坐标的函数）")

    @model_validator(mode="after")
    def _one_dimensional(self) -> "BoundaryZone":
        if self.distribution.dimension > 1:
            raise ValueError("边界区域传感器的分布只能依赖边坐标（axis 必须为0）")
        return self


class InternalPointwise(_FrozenModel):
    """内部点传感器 (b, δ_b)"""
    kind: Literal["internal_pointwise"] = Field(default="internal_pointwise", description="传感器类型")
    name: str = Field(description="传感器标识")
    location: Point = Field(description="位置 b（原生坐标）")


class BoundaryPointwise(_FrozenModel):
    """边界点传感器 (b, δ_b)，b ∈ ∂Ω"""
    kind: Literal["boundary_pointwise"] = Field(default="boundary_pointwise", description="传感器类型")
    name: str = Field(description="传感器标识")
    location: Point = Field(description="位置 b（原生坐标）")


class Filament(_FrozenModel):
    """细丝传感器 (σ, f)，曲线由点列的三次样条插值给出，f 是弧长的函数"""
    kind: Literal["filament"] = Field(default="filament", description="传感器类型")
    name: str = Field(description="传感器标识")
    points: Tuple[Point, ...] = Field(description="曲线点列（原生坐标）")
    distribution: Distribution = Field(default_factory=Uniform, description="沿弧长的分布 f")

    @model_validator(mode="after")
    def _check_points(self) -> "Filament":
        distinct = {(float(u), float(v)) for u, v in self.points}
        if len(distinct) < 2:
            raise ValueError("细丝至少需要两个不同的点")
        if self.distribution.dimension > 1:
            raise ValueError("细丝分布只能依赖弧长（axis 必须为0）")
        return self

    @property
    def midpoint(self) -> Point:
        """首末点连线中点（对称线位置）"""
        half = Fraction(1, 2)
        first, last = self.points[0], self.points[-1]
        return (first[0] + last[0]).scaled(half), (first[1] + last[1]).scaled(half)


Sensor = Annotated[
    Union[InternalZone, BoundaryZone, InternalPointwise, BoundaryPointwise, Filament],
    Field(discriminator="kind"),
]

SENSOR_KINDS: List[str] = ["internal_zone", "boundary_zone", "internal_pointwise", "boundary_pointwise", "filament"]


def scale_sensor(sensor, factor: float):
    """把传感器分布乘以常数（点传感器不变）"""
    if isinstance(sensor, (InternalPointwise, BoundaryPointwise)):
        return sensor
    return sensor.model_copy(update={"distribution": sensor.distribution.scaled(factor)})

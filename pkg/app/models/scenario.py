"""
场景配置模型

场景文件（JSON）描述区域、边界子区域Γ、传感器组、截断与容差、初始状态、时间窗和噪声。
省略的字段由 app.core.config.settings 补全，报告回显补全后的场景。
"""
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import settings
from app.models.geometry import BoundaryRegion, Domain, RectangleDomain
from app.models.sensor import Sensor


class _ScenarioModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class Truncation(_ScenarioModel):
    """截断参数"""
    rectangle_cutoff: Optional[int] = Field(default=None, ge=0, description="矩形区域每个方向的最大模态指标")
    angular_cutoff: Optional[int] = Field(default=None, ge=0, description="圆盘最大角向阶数")
    radial_cutoff: Optional[int] = Field(default=None, ge=1, description="圆盘最大径向阶数")
    gamma_basis: Literal["restricted", "cosine"] = Field(default="restricted", description="Γ上试探函数基的类型")
    gamma_size: Optional[int] = Field(default=None, ge=1, description="余弦基的大小K（restricted基由截断决定）")
    corollary_bound: Optional[int] = Field(default=None, ge=1, description="推论检验的模态上界J（默认取截断）")


class Tolerances(_ScenarioModel):
    """容差与求积参数"""
    rank: float = Field(default_factory=lambda: settings.RANK_TOLERANCE, gt=0, description="数值秩阈值ε_rank")
    group: float = Field(default_factory=lambda: settings.GROUP_TOLERANCE, gt=0, description="特征值分组容差ε_group")
    nodes_per_panel: int = Field(default_factory=lambda: settings.QUADRATURE_NODES_PER_PANEL, ge=2, description="每个面板的节点数")
    panels_per_segment: int = Field(default_factory=lambda: settings.QUADRATURE_PANELS_PER_SEGMENT, ge=1, description="每段面板数")


class SpectralOptions(_ScenarioModel):
    """特征系统选项"""
    radial_family: Literal["neumann", "dirichlet"] = Field(
        default_factory=lambda: settings.DISC_RADIAL_FAMILY, description="圆盘径向常数族"
    )
    normalization: Literal["l2", "h1"] = Field(default_factory=lambda: settings.NORMALIZATION, description="特征函数归一化")


class ModeCoefficient(_ScenarioModel):
    """初始状态的一个模态系数"""
    family: Literal["rectangle", "axial", "cosine", "sine"] = Field(default="rectangle", description="模态族")
    i: int = Field(ge=0, description="第一个指标（角向阶数）")
    j: int = Field(ge=0, description="第二个指标（径向阶数）")
    value: float = Field(default=1.0, description="系数值")


class InitialState(_ScenarioModel):
    """初始状态x₀的模态描述：显式系数列表，或预设 "mode i j" / "mode <family> i j" """
    preset: Optional[str] = Field(default=None, description="预设，例如 \"mode 2 1\"")
    modes: Tuple[ModeCoefficient, ...] = Field(default=(), description="显式模态系数")

    @model_validator(mode="after")
    def _resolve_preset(self) -> "InitialState":
        if self.preset is None:
            if not self.modes:
                raise ValueError("initial_state 需要 preset 或 modes")
            return self
        if self.modes:
            raise ValueError("initial_state 的 preset 与 modes 不能同时给出")
        parts = self.preset.split()
        try:
            if len(parts) == 3 and parts[0] == "mode":
                self.modes = (ModeCoefficient(i=int(parts[1]), j=int(parts[2])),)
            elif len(parts) == 4 and parts[0] == "mode":
                self.modes = (ModeCoefficient(family=parts[1], i=int(parts[2]), j=int(parts[3])),)
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"无法识别的初始状态预设: {self.preset!r}")
        self.preset = None
        return self


class TimeWindow(_ScenarioModel):
    """采样时间窗"""
    start: float = Field(default_factory=lambda: settings.TIME_WINDOW_START, ge=0, description="起点")
    end: float = Field(default_factory=lambda: settings.TIME_WINDOW_END, gt=0, description="终点")
    samples: Optional[int] = Field(default=None, ge=1, description="采样点数（默认每个模态4个）")

    @model_validator(mode="after")
    def _ordered(self) -> "TimeWindow":
        if self.end <= self.start:
            raise ValueError("时间窗终点必须大于起点")
        return self


class NoiseSpec(_ScenarioModel):
    """加性高斯噪声"""
    sigma: float = Field(default=0.0, ge=0, description="标准差")
    seed: Optional[int] = Field(default=None, description="随机种子（sigma>0时必填）")

    @model_validator(mode="after")
    def _seed_required(self) -> "NoiseSpec":
        if self.sigma > 0 and self.seed is None:
            raise ValueError("噪声标准差大于0时必须给出 seed")
        return self


class ScenarioConfig(_ScenarioModel):
    """场景配置"""
    domain: Domain = Field(description="区域Ω")
    region: BoundaryRegion = Field(description="边界子区域Γ")
    sensors: Tuple[Sensor, ...] = Field(description="传感器组")
    truncation: Truncation = Field(default_factory=Truncation, description="截断参数")
    tolerances: Tolerances = Field(default_factory=Tolerances, description="容差与求积参数")
    spectral: SpectralOptions = Field(default_factory=SpectralOptions, description="特征系统选项")
    initial_state: Optional[InitialState] = Field(default=None, description="初始状态（reconstruct命令需要）")
    time_window: TimeWindow = Field(default_factory=TimeWindow, description="采样时间窗")
    noise: NoiseSpec = Field(default_factory=NoiseSpec, description="噪声")
    ridge: float = Field(default=0.0, ge=0, description="岭回归参数λ_reg")
    sobolev_weighted: bool = Field(default=False, description="是否同时报告Sobolev加权代理范数")

    @field_validator("sensors")
    @classmethod
    def _at_least_one(cls, value):
        if len(value) == 0:
            raise ValueError("至少需要一个传感器")
        names = [sensor.name for sensor in value]
        if len(set(names)) != len(names):
            raise ValueError("传感器名称必须唯一")
        return value

    @model_validator(mode="after")
    def _resolve_cutoffs(self) -> "ScenarioConfig":
        truncation = self.truncation
        if isinstance(self.domain, RectangleDomain):
            if truncation.angular_cutoff is not None or truncation.radial_cutoff is not None:
                raise ValueError("矩形区域只接受 rectangle_cutoff")
            if truncation.rectangle_cutoff is None:
                truncation.rectangle_cutoff = settings.RECTANGLE_CUTOFF
        else:
            if truncation.rectangle_cutoff is not None:
                raise ValueError("圆盘区域只接受 angular_cutoff 与 radial_cutoff")
            if truncation.angular_cutoff is None:
                truncation.angular_cutoff = settings.DISC_ANGULAR_CUTOFF
            if truncation.radial_cutoff is None:
                truncation.radial_cutoff = settings.DISC_RADIAL_CUTOFF
        if truncation.corollary_bound is None:
            truncation.corollary_bound = max(1, truncation.rectangle_cutoff or truncation.angular_cutoff or 1)
        return self

    @property
    def cutoff(self) -> Tuple[int, ...]:
        if isinstance(self.domain, RectangleDomain):
            return (self.truncation.rectangle_cutoff,)
        return (self.truncation.angular_cutoff, self.truncation.radial_cutoff)

    def sensor_names(self) -> List[str]:
        return [sensor.name for sensor in self.sensors]

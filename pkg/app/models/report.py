"""
报告数据模型 - 判定结果、重构结果、扫描表与模态表

报告字段顺序固定，序列化结果逐字节确定；计时只写入日志。
"""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.models.scenario import ScenarioConfig


class _ReportModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ModeRecord(_ReportModel):
    """模态表中的一行"""
    label: str = Field(description="模态标签，例如 (2,1) 或 cosine(1,1)")
    family: str = Field(description="模态族")
    i: int = Field(description="第一个指标")
    j: int = Field(description="第二个指标")
    eigenvalue: float = Field(description="特征值λ")
    norm_constant: float = Field(description="归一化常数")
    group: int = Field(description="所属特征值组序号")


class GroupRecord(_ReportModel):
    """特征值组的秩检验记录"""
    index: int = Field(description="组序号（按λ递减）")
    eigenvalue: float = Field(description="特征值λ_n")
    multiplicity: int = Field(description="重数r_n")
    members: List[str] = Field(description="组内模态标签")
    rank: int = Field(description="G_n的数值秩")
    sigma_min: float = Field(description="G_n的第r_n个奇异值（不足时为0）")
    sigma_max: float = Field(description="G_n的最大奇异值")
    full_rank: bool = Field(description="rank G_n = r_n")
    effective_gamma_multiplicity: Optional[int] = Field(default=None, description="Γ上可区分的成员数（诊断）")


class OmegaVerdict(_ReportModel):
    """Ω-strategic 判定"""
    passed: bool = Field(description="是否Ω-strategic")
    reason: Optional[Literal["too_few_sensors", "rank_deficient"]] = Field(default=None, description="失败原因")
    sensor_count: int = Field(description="传感器数q")
    max_multiplicity: int = Field(description="最大重数r")
    witness_group: Optional[int] = Field(default=None, description="第一个失败组的序号")
    witness_eigenvalue: Optional[float] = Field(default=None, description="第一个失败组的特征值")
    failing_groups: List[int] = Field(default_factory=list, description="所有失败组的序号")
    degenerate_witness_group: Optional[int] = Field(default=None, description="第一个失败的重特征值组（r_n ≥ 2）")
    degenerate_witness_eigenvalue: Optional[float] = Field(default=None, description="该重特征值组的特征值")


class GammaVerdict(_ReportModel):
    """Γ-strategic（截断核检验）判定"""
    passed: bool = Field(description="是否Γ-strategic")
    basis: Literal["restricted", "cosine"] = Field(description="Γ上试探函数基")
    basis_size: int = Field(description="试探函数个数K")
    rows: int = Field(description="核矩阵B的行数")
    sigma_min: float = Field(description="B的第K个奇异值")
    sigma_max: float = Field(description="B的最大奇异值")
    nu: Optional[float] = Field(default=None, description="可观测常数估计ν = 1/σ_min")
    nu_sobolev: Optional[float] = Field(default=None, description="Sobolev加权代理范数下的ν")
    norm: str = Field(default="L2(Γ) surrogate", description="ν所对应的代理范数")


class SensorVerdict(_ReportModel):
    """单个传感器的Γ核检验"""
    name: str = Field(description="传感器标识")
    kind: str = Field(description="传感器类型")
    gamma_passed: bool = Field(description="单独是否Γ-strategic")
    sigma_min: float = Field(description="单独的核矩阵σ_min")


class CorollaryResult(_ReportModel):
    """放置推论检验结果"""
    rule: str = Field(description="推论编号")
    passed: bool = Field(description="算术条件是否成立")
    witness: Optional[List[int]] = Field(default=None, description="第一个违反条件的指标")
    exact: bool = Field(description="是否基于精确有理坐标")
    advisory: bool = Field(description="浮点坐标下的结果仅供参考")
    detail: str = Field(default="", description="检验的条件说明")


class Disagreement(_ReportModel):
    """推论与核检验不一致"""
    rule: str = Field(description="推论编号")
    corollary_passed: bool = Field(description="推论判定")
    kernel_passed: bool = Field(description="核检验判定")
    location: Optional[List[float]] = Field(default=None, description="扫描位置（若来自扫描）")


class SimpleSpectrum(_ReportModel):
    """单传感器前提诊断：矩形 (a1/a2)² ∉ ℕ 与截断后的最大重数"""
    aspect_ratio_squared: Optional[str] = Field(default=None, description="(a1/a2)² 的有理表示")
    in_naturals: Optional[bool] = Field(default=None, description="(a1/a2)² ∈ ℕ")
    max_multiplicity: int = Field(description="截断基的最大重数r")


class TruncationInfo(_ReportModel):
    """计算所用的截断与容差"""
    cutoff: List[int] = Field(description="截断（矩形为单个上界，圆盘为角向与径向）")
    mode_count: int = Field(description="模态总数M")
    group_count: int = Field(description="特征值组数")
    rank_tolerance: float = Field(description="ε_rank")
    group_tolerance: float = Field(description="ε_group")
    nodes_per_panel: int = Field(description="每面板节点数")
    panels_per_segment: int = Field(description="每段面板数")
    radial_family: Optional[str] = Field(default=None, description="圆盘径向常数族")
    normalization: str = Field(description="归一化方式")


class StrategicReport(_ReportModel):
    """策略性判定报告"""
    verdict_omega: OmegaVerdict = Field(description="Ω-strategic 判定")
    verdict_gamma: GammaVerdict = Field(description="Γ-strategic 判定")
    groups: List[GroupRecord] = Field(description="逐组记录")
    sensors: List[SensorVerdict] = Field(description="逐传感器判定")
    corollaries: List[CorollaryResult] = Field(default_factory=list, description="适用推论的检验结果")
    disagreements: List[Disagreement] = Field(default_factory=list, description="推论与核检验的不一致")
    simple_spectrum: SimpleSpectrum = Field(description="单传感器前提诊断")
    truncation: TruncationInfo = Field(description="截断与容差")


class CoefficientEstimate(_ReportModel):
    """一个模态系数的估计"""
    label: str = Field(description="模态标签")
    estimate: float = Field(description="估计值")
    true_value: Optional[float] = Field(default=None, description="真实值（模拟时已知）")
    identifiable: bool = Field(description="是否可辨识")


class Conditioning(_ReportModel):
    """设计矩阵条件数"""
    sigma_min: float = Field(description="未缩放设计矩阵的最小奇异值")
    sigma_max: float = Field(description="未缩放设计矩阵的最大奇异值")
    scaled_condition: Optional[float] = Field(default=None, description="列缩放后的条件数")


class TraceProfile(_ReportModel):
    """Γ上的迹剖面（求积节点处）"""
    arc_length: List[float] = Field(description="弧长坐标")
    estimated: List[float] = Field(description="估计迹")
    true: Optional[List[float]] = Field(default=None, description="真实迹")


class OutputSeries(_ReportModel):
    """输出轨迹"""
    times: List[float] = Field(description="采样时刻")
    values: Dict[str, List[float]] = Field(description="每个传感器的输出")
    noise_sigma: float = Field(default=0.0, description="噪声标准差")
    noise_seed: Optional[int] = Field(default=None, description="噪声种子")


class ReconstructionResult(_ReportModel):
    """重构结果"""
    method: str = Field(default="modal exponential-fit least squares", description="重构方法")
    coefficients: List[CoefficientEstimate] = Field(description="模态系数估计")
    trace_profile: TraceProfile = Field(description="Γ上的迹剖面")
    error_gamma: Optional[float] = Field(default=None, description="Γ上的L²代理误差")
    error_boundary: Optional[float] = Field(default=None, description="∂Ω上的L²代理误差")
    error_gamma_sobolev: Optional[float] = Field(default=None, description="Γ上的Sobolev加权代理误差")
    conditioning: Conditioning = Field(description="设计矩阵条件数")
    ridge: float = Field(description="所用岭参数")
    sample_count: int = Field(description="采样点总数（传感器数×时刻数）")
    recommended_samples: int = Field(description="建议的最少时刻数 ⌈M/q⌉")


class SweepRow(_ReportModel):
    """扫描表的一行"""
    x: float = Field(description="第一原生坐标")
    y: float = Field(description="第二原生坐标")
    location: List[str] = Field(description="精确坐标")
    sigma_min: Optional[float] = Field(default=None, description="核矩阵σ_min")
    gamma_passed: Optional[bool] = Field(default=None, description="Γ核检验")
    omega_passed: Optional[bool] = Field(default=None, description="Ω秩检验")
    corollary_passed: Optional[bool] = Field(default=None, description="适用推论的判定（若有）")
    error: Optional[str] = Field(default=None, description="该位置的错误信息")


class SweepTable(_ReportModel):
    """布置扫描结果"""
    template: str = Field(description="被扫描的传感器")
    nx: int = Field(description="第一方向网格数")
    ny: int = Field(description="第二方向网格数")
    rows: List[SweepRow] = Field(description="逐位置结果（网格顺序）")
    disagreements: List[Disagreement] = Field(default_factory=list, description="推论与核检验的不一致")


class ModesTable(_ReportModel):
    """模态与重数表"""
    modes: List[ModeRecord] = Field(description="模态列表（按组排序）")
    groups: List[GroupRecord] = Field(default_factory=list, description="特征值组（不含秩信息时rank为0）")
    simple_spectrum: SimpleSpectrum = Field(description="单传感器前提诊断")


class CounterexampleSummary(_ReportModel):
    """反例的期望判定对"""
    omega_strategic: bool = Field(description="是否Ω-strategic（期望否）")
    gamma_strategic: bool = Field(description="是否Γ-strategic（期望是）")
    degenerate_group_rank: int = Field(description="λ=−5π² 组的秩")
    degenerate_group_multiplicity: int = Field(description="λ=−5π² 组的重数")
    reconstruction_error_gamma: Optional[float] = Field(default=None, description="x₀=φ_(2,1) 的Γ迹误差")


class Report(_ReportModel):
    """完整报告"""
    tool: str = Field(description="工具名称")
    version: str = Field(description="工具版本")
    command: str = Field(description="命令")
    scenario: Optional[ScenarioConfig] = Field(default=None, description="补全默认值后的场景回显")
    strategic: Optional[StrategicReport] = Field(default=None, description="策略性判定")
    reconstruction: Optional[ReconstructionResult] = Field(default=None, description="重构结果")
    outputs: Optional[OutputSeries] = Field(default=None, description="模拟输出")
    sweep: Optional[SweepTable] = Field(default=None, description="扫描表")
    modes: Optional[ModesTable] = Field(default=None, description="模态表")
    counterexample: Optional[CounterexampleSummary] = Field(default=None, description="反例判定对")
    timings: Optional[Dict[str, float]] = Field(default=None, description="计时（仅在 --timings 时写入）")

"""
策略性分析编排 - 把场景配置转换为截断基、输出系数矩阵与试探基，并汇总各项判定
"""
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from app.core.config import settings
from app.core.logging import get_logger
from app.models.geometry import BoundaryRegion, RectangleDomain, coordinate_ratio, validate_region
from app.models.report import (
    CorollaryResult,
    Disagreement,
    GammaVerdict,
    GroupRecord,
    ModeRecord,
    ModesTable,
    OmegaVerdict,
    SensorVerdict,
    SimpleSpectrum,
    StrategicReport,
    TruncationInfo,
)
from app.models.scenario import ScenarioConfig
from app.services.boundary.gamma_basis import GammaBasis, build_gamma_basis
from app.services.boundary.quadrature import QuadratureRule
from app.services.boundary.trace import restricted_mode_gram
from app.services.observability.corollaries import CorollaryOutcome, check_applicable
from app.services.observability.kernel_test import SURROGATE_NORM, KernelResult, evaluate_kernel, mode_gamma_pairings
from app.services.observability.rank_test import OmegaResult, effective_gamma_multiplicity, omega_strategic_test
from app.services.sensors.output import coefficient_matrix
from app.services.spectral.modes import ModeBasis, enumerate_modes

logger = get_logger(__name__)


@dataclass
class ScenarioContext:
    """由场景构造、在各命令间共享的计算对象"""
    config: ScenarioConfig
    rule: QuadratureRule
    basis: ModeBasis
    matrix: np.ndarray
    gamma: GammaBasis
    pairings: np.ndarray
    timings: Dict[str, float]

    @property
    def region(self) -> BoundaryRegion:
        return self.config.region


def quadrature_rule(config: ScenarioConfig) -> QuadratureRule:
    return QuadratureRule(
        nodes_per_panel=config.tolerances.nodes_per_panel,
        panels_per_segment=config.tolerances.panels_per_segment,
    )


def build_basis(config: ScenarioConfig) -> ModeBasis:
    """按场景的截断与谱选项枚举截断基"""
    return enumerate_modes(
        config.domain,
        config.cutoff,
        radial_family=config.spectral.radial_family,
        normalization=config.spectral.normalization,
        group_tolerance=config.tolerances.group,
    )


def prepare(config: ScenarioConfig) -> ScenarioContext:
    """
    构造截断基、输出系数矩阵C和Γ上的试探基

    Args:
        config: 已校验的场景配置

    Returns:
        ScenarioContext
    """
    timings: Dict[str, float] = {}
    validate_region(config.domain, config.region)
    rule = quadrature_rule(config)

    started = time.perf_counter()
    basis = build_basis(config)
    timings["basis"] = time.perf_counter() - started
    logger.info(f"截断基: {config.domain.kind}, cutoff={basis.cutoff}, M={basis.size}, 组数={len(basis.groups)}")

    started = time.perf_counter()
    matrix = coefficient_matrix(config.sensors, basis, rule)
    timings["coefficients"] = time.perf_counter() - started

    started = time.perf_counter()
    gamma = build_gamma_basis(
        basis, config.region, config.truncation.gamma_basis, config.truncation.gamma_size, rule, config.tolerances.rank
    )
    pairings = mode_gamma_pairings(basis, gamma)
    timings["gamma_basis"] = time.perf_counter() - started
    logger.info(f"Γ试探基: {gamma.kind}, K={gamma.size}")

    return ScenarioContext(
        config=config, rule=rule, basis=basis, matrix=matrix, gamma=gamma, pairings=pairings, timings=timings
    )


def resolved_scenario(context: ScenarioContext) -> ScenarioConfig:
    """回显补全默认值后的场景（K 与采样点数填入实际取值）"""
    config = context.config
    truncation = config.truncation
    if truncation.gamma_size is None and context.gamma.size > 0:
        truncation = truncation.model_copy(update={"gamma_size": context.gamma.size})
    window = config.time_window
    if window.samples is None:
        window = window.model_copy(update={"samples": settings.default_time_samples(context.basis.size)})
    return config.model_copy(update={"truncation": truncation, "time_window": window})


def simple_spectrum(basis: ModeBasis, max_denominator: Optional[int] = None) -> SimpleSpectrum:
    """矩形 (a1/a2)² ∈ ℕ 判定与截断基最大重数"""
    domain = basis.domain
    if not isinstance(domain, RectangleDomain):
        return SimpleSpectrum(max_multiplicity=basis.max_multiplicity)
    ratio, exact = coordinate_ratio(domain.a1, domain.a2, max_denominator or settings.RATIONAL_MAX_DENOMINATOR)
    if ratio is None:
        return SimpleSpectrum(aspect_ratio_squared="irrational", in_naturals=False, max_multiplicity=basis.max_multiplicity)
    squared: Fraction = ratio * ratio
    if not exact:
        logger.warning("区域边长不是精确有理数，(a1/a2)² 的判定仅供参考")
    return SimpleSpectrum(
        aspect_ratio_squared=str(squared),
        in_naturals=squared.denominator == 1,
        max_multiplicity=basis.max_multiplicity,
    )


def group_records(basis: ModeBasis, omega: Optional[OmegaResult] = None, region: Optional[BoundaryRegion] = None,
                  rule: Optional[QuadratureRule] = None, tolerance: Optional[float] = None) -> List[GroupRecord]:
    """逐组记录；没有秩检验结果时 rank 与奇异值记为0"""
    gram = restricted_mode_gram(basis, region, rule) if region is not None else None
    records = []
    for number, group in enumerate(basis.groups):
        matrix = omega.records[number] if omega is not None else None
        records.append(
            GroupRecord(
                index=number,
                eigenvalue=group.eigenvalue,
                multiplicity=group.multiplicity,
                members=group.labels,
                rank=matrix.rank if matrix else 0,
                sigma_min=matrix.sigma_min if matrix else 0.0,
                sigma_max=matrix.sigma_max if matrix else 0.0,
                full_rank=matrix.full_rank if matrix else False,
                effective_gamma_multiplicity=(
                    effective_gamma_multiplicity(basis, number, region, rule, tolerance, gram) if gram is not None else None
                ),
            )
        )
    return records


def modes_table(basis: ModeBasis) -> ModesTable:
    """模态与重数表"""
    modes = []
    for number, group in enumerate(basis.groups):
        for mode in group.members:
            modes.append(
                ModeRecord(
                    label=mode.index.label,
                    family=mode.index.family,
                    i=mode.index.i,
                    j=mode.index.j,
                    eigenvalue=mode.eigenvalue,
                    norm_constant=mode.norm_constant,
                    group=number,
                )
            )
    return ModesTable(modes=modes, groups=group_records(basis), simple_spectrum=simple_spectrum(basis))


def omega_verdict(omega: OmegaResult) -> OmegaVerdict:
    witness = omega.witness
    degenerate = omega.degenerate_witness
    return OmegaVerdict(
        passed=omega.passed,
        reason=omega.reason,
        sensor_count=omega.sensor_count,
        max_multiplicity=omega.max_multiplicity,
        witness_group=witness.group_index if witness else None,
        witness_eigenvalue=witness.group.eigenvalue if witness else None,
        failing_groups=omega.failing_groups,
        degenerate_witness_group=degenerate.group_index if degenerate else None,
        degenerate_witness_eigenvalue=degenerate.group.eigenvalue if degenerate else None,
    )


def gamma_verdict(kernel: KernelResult, sobolev: bool = False) -> GammaVerdict:
    return GammaVerdict(
        passed=kernel.passed,
        basis=kernel.basis_kind,
        basis_size=kernel.basis_size,
        rows=kernel.rows,
        sigma_min=kernel.sigma_min,
        sigma_max=kernel.sigma_max,
        nu=kernel.nu,
        nu_sobolev=kernel.nu_sobolev if sobolev else None,
        norm=SURROGATE_NORM,
    )


def corollary_results(outcomes: List[CorollaryOutcome]) -> List[CorollaryResult]:
    return [
        CorollaryResult(
            rule=outcome.rule,
            passed=outcome.passed,
            witness=outcome.witness,
            exact=outcome.exact,
            advisory=outcome.advisory,
            detail=outcome.detail,
        )
        for outcome in outcomes
    ]


def analyze(config: ScenarioConfig, context: Optional[ScenarioContext] = None) -> StrategicReport:
    """
    策略性分析：Ω秩检验、Γ核检验、逐传感器判定、适用推论与单传感器前提诊断

    Args:
        config: 场景配置
        context: 已构造的计算对象（可选）

    Returns:
        StrategicReport
    """
    context = context or prepare(config)
    basis, rule, tolerance = context.basis, context.rule, config.tolerances.rank

    started = time.perf_counter()
    omega = omega_strategic_test(config.sensors, basis, context.matrix, rule, tolerance)
    kernel = evaluate_kernel(context.matrix, basis, context.gamma, tolerance, context.pairings)
    sensors = []
    for number, sensor in enumerate(config.sensors):
        own = evaluate_kernel(context.matrix[number:number + 1], basis, context.gamma, tolerance, context.pairings)
        sensors.append(SensorVerdict(name=sensor.name, kind=sensor.kind, gamma_passed=own.passed, sigma_min=own.sigma_min))
    context.timings["verdicts"] = time.perf_counter() - started

    outcomes = check_applicable(config.domain, config.sensors, config.truncation.corollary_bound)
    disagreements = [
        Disagreement(rule=outcome.rule, corollary_passed=outcome.passed, kernel_passed=kernel.passed)
        for outcome in outcomes
        if outcome.passed != kernel.passed
    ]
    for disagreement in disagreements:
        logger.warning(
            f"推论 {disagreement.rule} 判定为 {'通过' if disagreement.corollary_passed else '失败'}，"
            f"与核检验结论不一致"
        )

    logger.info(
        f"分析完成: Ω-strategic={'是' if omega.passed else '否'}, Γ-strategic={'是' if kernel.passed else '否'}, "
        f"σ_min={kernel.sigma_min:.6e}, 适用推论 {len(outcomes)} 条"
    )
    return StrategicReport(
        verdict_omega=omega_verdict(omega),
        verdict_gamma=gamma_verdict(kernel, config.sobolev_weighted),
        groups=group_records(basis, omega, config.region, rule, tolerance),
        sensors=sensors,
        corollaries=corollary_results(outcomes),
        disagreements=disagreements,
        simple_spectrum=simple_spectrum(basis),
        truncation=truncation_info(context),
    )


def truncation_info(context: ScenarioContext) -> TruncationInfo:
    config, basis = context.config, context.basis
    return TruncationInfo(
        cutoff=list(basis.cutoff),
        mode_count=basis.size,
        group_count=len(basis.groups),
        rank_tolerance=config.tolerances.rank,
        group_tolerance=config.tolerances.group,
        nodes_per_panel=context.rule.nodes_per_panel,
        panels_per_segment=context.rule.panels_per_segment,
        radial_family=None if isinstance(basis.domain, RectangleDomain) else basis.radial_family,
        normalization=basis.normalization,
    )

"""
重构流程 - 模拟输出、估计系数、计算迹剖面与误差，并转换为报告模型
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.core.config import settings
from app.core.exceptions import ScenarioValidationException
from app.core.logging import get_logger
from app.models.report import CoefficientEstimate, Conditioning, OutputSeries, ReconstructionResult, TraceProfile
from app.models.scenario import ScenarioConfig
from app.services.observability.analyzer import ScenarioContext, prepare
from app.services.reconstruction.estimator import (
    ModalEstimate,
    initial_coefficients,
    reconstruct,
    reconstruction_error,
    trace_estimate,
    weighted_trace_error,
)
from app.services.sensors.output import OutputSamples, simulate_outputs, uniform_times

logger = get_logger(__name__)


@dataclass(frozen=True)
class ReconstructionRun:
    """一次模拟加重构的全部结果"""
    x0: np.ndarray
    samples: OutputSamples
    estimate: ModalEstimate
    result: ReconstructionResult
    outputs: OutputSeries


def sample_times(config: ScenarioConfig, mode_count: int) -> np.ndarray:
    window = config.time_window
    count = window.samples or settings.default_time_samples(mode_count)
    return uniform_times(window.start, window.end, count)


def output_series(samples: OutputSamples) -> OutputSeries:
    return OutputSeries(
        times=samples.times.tolist(),
        values={name: samples.values[row].tolist() for row, name in enumerate(samples.sensor_names)},
        noise_sigma=samples.noise_sigma,
        noise_seed=samples.noise_seed,
    )


def run_reconstruction(config: ScenarioConfig, context: Optional[ScenarioContext] = None) -> ReconstructionRun:
    """
    按场景模拟输出并重构初始状态

    Args:
        config: 场景配置（需要 initial_state）
        context: 已构造的计算对象（可选）

    Returns:
        ReconstructionRun

    Raises:
        ScenarioValidationException: 场景没有给出初始状态
    """
    if config.initial_state is None:
        raise ScenarioValidationException("重构需要 initial_state", field="initial_state")
    context = context or prepare(config)
    basis, rule = context.basis, context.rule

    x0 = initial_coefficients(config.initial_state, basis)
    times = sample_times(config, basis.size)
    if times.size * len(config.sensors) < basis.size:
        logger.warning(f"采样不足: {times.size} 个时刻 × {len(config.sensors)} 个传感器 < {basis.size} 个模态")
    noise = (config.noise.sigma, config.noise.seed)
    samples = simulate_outputs(config.sensors, basis, x0, times, noise, rule, context.matrix)
    estimate = reconstruct(samples, config.sensors, basis, config.ridge, config.tolerances.rank, context.matrix, rule)

    estimated_trace = trace_estimate(estimate, basis, config.region, rule)
    true_trace = trace_estimate(x0, basis, config.region, rule)
    error_gamma, error_boundary = reconstruction_error(x0, estimate, basis, config.region, rule)
    error_sobolev = weighted_trace_error(x0, estimate, basis, context.gamma) if config.sobolev_weighted else None
    logger.info(f"重构完成: Γ误差={error_gamma:.3e}, ∂Ω误差={error_boundary:.3e}, σ_min={estimate.sigma_min:.3e}")

    result = ReconstructionResult(
        coefficients=[
            CoefficientEstimate(
                label=mode.index.label,
                estimate=float(estimate.coefficients[position]),
                true_value=float(x0[position]),
                identifiable=bool(estimate.identifiable[position]),
            )
            for position, mode in enumerate(basis.modes)
        ],
        trace_profile=TraceProfile(
            arc_length=estimated_trace.arc_length.tolist(),
            estimated=estimated_trace.values.tolist(),
            true=true_trace.values.tolist(),
        ),
        error_gamma=error_gamma,
        error_boundary=error_boundary,
        error_gamma_sobolev=error_sobolev,
        conditioning=Conditioning(
            sigma_min=estimate.sigma_min,
            sigma_max=estimate.sigma_max,
            scaled_condition=estimate.scaled_condition,
        ),
        ridge=estimate.ridge,
        sample_count=estimate.sample_count,
        recommended_samples=estimate.recommended_samples,
    )
    return ReconstructionRun(x0=x0, samples=samples, estimate=estimate, result=result, outputs=output_series(samples))

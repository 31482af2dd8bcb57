"""
单位正方形上的边界区域传感器反例

Ω = [0,1]²，Γ = [0,1]×{0}，传感器支撑在 {0}×[0,1] 上，分布 f = cos(πξ₂)。
该传感器对模态 (i,1) 有非零系数，对 (1,i) 系数为0，因此在重特征值 λ = −5π² 上秩为1，
不是 Ω-strategic；但 (i,1) 的迹 cos(iπs) 在Γ上张成前六个余弦，截断核检验通过。
"""
import math
from dataclasses import dataclass
from typing import Any, Dict

from app.core.exceptions import InvariantViolationException
from app.core.logging import get_logger
from app.models.report import CounterexampleSummary, StrategicReport
from app.models.scenario import ScenarioConfig
from app.services.observability.analyzer import ScenarioContext, analyze, prepare
from app.services.reconstruction.runner import ReconstructionRun, run_reconstruction

logger = get_logger(__name__)

DEGENERATE_EIGENVALUE = -5.0 * math.pi ** 2

COUNTEREXAMPLE_SCENARIO: Dict[str, Any] = {
    "domain": {"kind": "rectangle", "a1": "1", "a2": "1"},
    "region": {"segments": [{"edge": "south", "lo": "0", "hi": "1"}]},
    "sensors": [
        {
            "kind": "boundary_zone",
            "name": "gamma0",
            "support": {"segments": [{"edge": "west", "lo": "0", "hi": "1"}]},
            "distribution": {"type": "cosine", "terms": [{"axis": 0, "frequency": 1.0}]},
        }
    ],
    "truncation": {"rectangle_cutoff": 5, "gamma_basis": "cosine", "gamma_size": 6},
    "initial_state": {"preset": "mode 2 1"},
}


def counterexample_config() -> ScenarioConfig:
    return ScenarioConfig.model_validate(COUNTEREXAMPLE_SCENARIO)


@dataclass(frozen=True)
class CounterexampleRun:
    """反例的完整结果"""
    config: ScenarioConfig
    context: ScenarioContext
    strategic: StrategicReport
    reconstruction: ReconstructionRun
    summary: CounterexampleSummary


def counterexample_run() -> CounterexampleRun:
    """
    运行反例：Ω秩检验（期望失败）、Γ核检验（期望通过）以及 x₀ = φ_(2,1) 的无噪声重构

    Returns:
        CounterexampleRun

    Raises:
        InvariantViolationException: 截断基中找不到 λ = −5π² 组
    """
    config = counterexample_config()
    context = prepare(config)
    strategic = analyze(config, context)
    reconstruction = run_reconstruction(config, context)

    number = context.basis.find_group(DEGENERATE_EIGENVALUE)
    if number is None:
        raise InvariantViolationException("截断基中没有 λ = −5π² 组")
    record = strategic.groups[number]

    summary = CounterexampleSummary(
        omega_strategic=strategic.verdict_omega.passed,
        gamma_strategic=strategic.verdict_gamma.passed,
        degenerate_group_rank=record.rank,
        degenerate_group_multiplicity=record.multiplicity,
        reconstruction_error_gamma=reconstruction.result.error_gamma,
    )
    if summary.omega_strategic or not summary.gamma_strategic:
        logger.warning(
            f"反例判定与预期不符: Ω-strategic={summary.omega_strategic}, Γ-strategic={summary.gamma_strategic}"
        )
    else:
        logger.info(f"反例判定: 非Ω-strategic，Γ-strategic；λ=−5π² 组秩 {record.rank}/{record.multiplicity}")
    return CounterexampleRun(
        config=config, context=context, strategic=strategic, reconstruction=reconstruction, summary=summary
    )

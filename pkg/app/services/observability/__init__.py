"""
可观测性判定服务包 - 秩检验、核检验、放置推论与布置扫描
"""
from .analyzer import ScenarioContext, analyze, build_basis, modes_table, prepare, resolved_scenario, simple_spectrum
from .corollaries import RULES, CorollaryOutcome, applicable_rules, check_applicable, corollary_check
from .kernel_test import KernelResult, evaluate_kernel, gamma_kernel_test, kernel_matrix, observability_constant
from .rank_test import (
    GroupMatrix,
    OmegaResult,
    assemble_group_matrix,
    effective_gamma_multiplicity,
    omega_strategic_test,
)
from .sweep import grid_points, parse_grid, placement_sweep, placement_sweep_async

__all__ = [
    "ScenarioContext",
    "analyze",
    "build_basis",
    "modes_table",
    "prepare",
    "resolved_scenario",
    "simple_spectrum",
    "RULES",
    "CorollaryOutcome",
    "applicable_rules",
    "check_applicable",
    "corollary_check",
    "KernelResult",
    "evaluate_kernel",
    "gamma_kernel_test",
    "kernel_matrix",
    "observability_constant",
    "GroupMatrix",
    "OmegaResult",
    "assemble_group_matrix",
    "effective_gamma_multiplicity",
    "omega_strategic_test",
    "grid_points",
    "parse_grid",
    "placement_sweep",
    "placement_sweep_async",
]

"""
重构服务包 - 指数拟合最小二乘、迹估计与反例
"""
from .counterexample import CounterexampleRun, counterexample_config, counterexample_run
from .estimator import (
    ModalEstimate,
    TraceSamples,
    design_matrix,
    initial_coefficients,
    reconstruct,
    reconstruction_error,
    trace_estimate,
    weighted_trace_error,
)
from .runner import ReconstructionRun, run_reconstruction

__all__ = [
    "CounterexampleRun",
    "counterexample_config",
    "counterexample_run",
    "ModalEstimate",
    "TraceSamples",
    "design_matrix",
    "initial_coefficients",
    "reconstruct",
    "reconstruction_error",
    "trace_estimate",
    "weighted_trace_error",
    "ReconstructionRun",
    "run_reconstruction",
]

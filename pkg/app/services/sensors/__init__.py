"""
传感器输出服务包
"""
from .output import (
    OutputSamples,
    coefficient_matrix,
    filament_curve,
    output_coefficient,
    sensor_row,
    simulate_outputs,
    uniform_times,
)

__all__ = [
    "OutputSamples",
    "coefficient_matrix",
    "filament_curve",
    "output_coefficient",
    "sensor_row",
    "simulate_outputs",
    "uniform_times",
]

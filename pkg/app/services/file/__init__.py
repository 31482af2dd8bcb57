"""
文件处理服务模块
提供场景解析、报告与绘图数据输出功能
"""

from .report_writer import emit_plot_data, plot_frames, render_report, write_report
from .scenario_parser import dump_scenario, load_scenario, parse_scenario, validate_geometry

__all__ = [
    "emit_plot_data",
    "plot_frames",
    "render_report",
    "write_report",
    "dump_scenario",
    "load_scenario",
    "parse_scenario",
    "validate_geometry",
]

"""
命令行模块
"""
from .commands import build_parser, execute, main, run_command

__all__ = ["build_parser", "execute", "main", "run_command"]

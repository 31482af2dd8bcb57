"""
区域边界策略传感器分析工具 - 命令行入口

用法示例:
    python main.py counterexample --out report.json
    python main.py analyze --scenario docs/scenarios/counterexample.json --out report.json
"""
import sys

from app.cli import main

if __name__ == "__main__":
    sys.exit(main())

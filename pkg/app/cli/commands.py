"""
命令行入口 - analyze / reconstruct / sweep / counterexample / modes

每个命令先完成全部计算，再一次性原子写出报告与绘图数据；出错时返回非零退出码且不写任何文件。
未给出 --out 时报告打印到标准输出，日志始终写到标准错误。
"""
import argparse
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from app.core.config import settings
from app.core.exceptions import EXIT_OK, InvalidArgumentException, ScenarioValidationException, handle_exception
from app.core.logging import command_context, get_logger, setup_logging
from app.models.report import Report
from app.models.scenario import ScenarioConfig
from app.services.file.report_writer import emit_plot_data, render_report, write_report
from app.services.file.scenario_parser import load_scenario
from app.services.observability.analyzer import analyze, build_basis, modes_table, prepare, resolved_scenario
from app.services.observability.sweep import parse_grid, placement_sweep
from app.services.reconstruction.counterexample import counterexample_run
from app.services.reconstruction.runner import run_reconstruction

logger = get_logger(__name__)

COMMANDS = ("analyze", "reconstruct", "sweep", "counterexample", "modes")
SCENARIO_COMMANDS = ("analyze", "reconstruct", "sweep", "modes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regional-boundary-sensors",
        description="热方程区域边界可观测性：策略性传感器判定、初始状态重构与布置扫描",
    )
    parser.add_argument("--log-level", default=None, help="日志级别（默认取 LOG_LEVEL 配置）")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(sub: argparse.ArgumentParser, scenario_required: bool) -> None:
        sub.add_argument("--scenario", type=Path, required=scenario_required, help="场景文件（JSON）")
        sub.add_argument("--out", type=Path, default=None, help="报告输出路径（省略时打印到标准输出）")
        sub.add_argument("--timings", action="store_true", help="把计时写入报告（此时报告不再逐字节确定）")

    add_common(subparsers.add_parser("analyze", help="Ω/Γ 策略性判定"), True)

    reconstruct = subparsers.add_parser("reconstruct", help="模拟输出并重构初始状态")
    add_common(reconstruct, True)
    reconstruct.add_argument("--plots", type=Path, default=None, help="绘图数据（CSV）输出目录")

    sweep = subparsers.add_parser("sweep", help="在网格上扫描第一个传感器的位置")
    add_common(sweep, True)
    sweep.add_argument("--grid", required=True, help="网格规格，例如 5x5")
    sweep.add_argument("--plots", type=Path, default=None, help="绘图数据（CSV）输出目录")

    counterexample = subparsers.add_parser("counterexample", help="单位正方形边界传感器反例")
    add_common(counterexample, False)
    counterexample.add_argument("--plots", type=Path, default=None, help="绘图数据（CSV）输出目录")

    add_common(subparsers.add_parser("modes", help="模态与重数表"), True)
    return parser


def _report(command: str, **sections) -> Report:
    return Report(tool=settings.APP_NAME, version=settings.APP_VERSION, command=command, **sections)


def execute(command: str, config: Optional[ScenarioConfig] = None, grid: Optional[str] = None) -> Report:
    """
    执行命令并构造报告（不写文件）

    Args:
        command: 命令名
        config: 场景配置（counterexample 不需要）
        grid: sweep 的网格规格

    Returns:
        Report（timings 字段为计时字典，由调用方决定是否保留）
    """
    if command not in COMMANDS:
        raise InvalidArgumentException(f"未知命令: {command}")
    started = time.perf_counter()
    if command == "counterexample":
        run = counterexample_run()
        report = _report(
            command,
            scenario=resolved_scenario(run.context),
            strategic=run.strategic,
            reconstruction=run.reconstruction.result,
            outputs=run.reconstruction.outputs,
            counterexample=run.summary,
        )
        timings = dict(run.context.timings)
    else:
        if config is None:
            raise ScenarioValidationException(f"命令 {command} 需要场景文件", field="scenario")
        if command == "modes":
            report = _report(command, scenario=config, modes=modes_table(build_basis(config)))
            timings = {}
        else:
            context = prepare(config)
            if command == "analyze":
                report = _report(command, scenario=resolved_scenario(context), strategic=analyze(config, context))
            elif command == "reconstruct":
                strategic = analyze(config, context)
                reconstruction = run_reconstruction(config, context)
                report = _report(
                    command,
                    scenario=resolved_scenario(context),
                    strategic=strategic,
                    reconstruction=reconstruction.result,
                    outputs=reconstruction.outputs,
                )
            else:
                nx, ny = parse_grid(grid or "")
                table = placement_sweep(
                    config.sensors[0],
                    config.sensors[1:],
                    nx,
                    ny,
                    context.basis,
                    context.gamma,
                    rule=context.rule,
                    tolerance=config.tolerances.rank,
                    bound=config.truncation.corollary_bound,
                )
                report = _report(command, scenario=resolved_scenario(context), sweep=table)
            timings = dict(context.timings)

    timings["total"] = time.perf_counter() - started
    logger.info("计时: " + ", ".join(f"{name}={seconds:.3f}s" for name, seconds in timings.items()))
    return report.model_copy(update={"timings": timings})


def run_command(command: str, config: Optional[ScenarioConfig] = None, out: Optional[Path] = None,
                plots: Optional[Path] = None, grid: Optional[str] = None, timings: bool = False) -> int:
    """
    执行命令并写出结果

    Returns:
        退出码：0 成功，2 场景无效，3 数值或写入失败，4 内部错误
    """
    try:
        report = execute(command, config, grid)
        if not timings:
            report = report.model_copy(update={"timings": None})
        if out is not None:
            write_report(report, out, plots)
        else:
            if plots is not None:
                emit_plot_data(report, plots)
            sys.stdout.write(render_report(report))
    except Exception as exc:
        return handle_exception(exc)
    logger.info(f"命令 {command} 完成")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """命令行主函数，返回退出码"""
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    if args.log_level:
        setup_logging(args.log_level.upper())

    with command_context(args.command):
        config = None
        if args.command in SCENARIO_COMMANDS:
            try:
                config = load_scenario(args.scenario)
            except Exception as exc:
                return handle_exception(exc)

        return run_command(
            args.command,
            config,
            out=args.out,
            plots=getattr(args, "plots", None),
            grid=getattr(args, "grid", None),
            timings=args.timings,
        )

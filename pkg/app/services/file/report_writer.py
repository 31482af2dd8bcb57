"""
报告与绘图数据输出

所有文件先写入同目录下的临时文件，全部成功后再逐个替换到目标路径；
任一步失败时删除临时文件，已替换的目标恢复原状，不留下部分输出。
"""
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import pandas as pd

from app.core.exceptions import OutputWriteException
from app.core.logging import get_logger
from app.models.report import Report

logger = get_logger(__name__)

OUTPUTS_FILE = "outputs.csv"
TRACE_PROFILE_FILE = "trace_profile.csv"
SWEEP_FILE = "sweep.csv"


def render_report(report: Report) -> str:
    """报告的确定性JSON文本（字段顺序固定）"""
    return json.dumps(report.model_dump(mode="json"), ensure_ascii=False, indent=2) + "\n"


def outputs_frame(report: Report) -> Optional[pd.DataFrame]:
    """输出轨迹表：time 列加每个传感器一列"""
    if report.outputs is None:
        return None
    frame = pd.DataFrame({"time": report.outputs.times})
    for name, values in report.outputs.values.items():
        frame[name] = values
    return frame


def trace_profile_frame(report: Report) -> Optional[pd.DataFrame]:
    """迹剖面表：arc_length, true, estimated（每个Γ求积节点一行）"""
    if report.reconstruction is None:
        return None
    profile = report.reconstruction.trace_profile
    return pd.DataFrame(
        {
            "arc_length": profile.arc_length,
            "true": profile.true if profile.true is not None else [None] * len(profile.arc_length),
            "estimated": profile.estimated,
        }
    )


def sweep_frame(report: Report) -> Optional[pd.DataFrame]:
    """扫描热图表：x, y, sigma_min 与各判定列（每个网格点一行）"""
    if report.sweep is None:
        return None
    columns = ["x", "y", "sigma_min", "gamma_passed", "omega_passed", "corollary_passed", "error"]
    rows = [row.model_dump(include=set(columns)) for row in report.sweep.rows]
    return pd.DataFrame(rows, columns=columns)


def plot_frames(report: Report) -> Dict[str, pd.DataFrame]:
    """报告中包含的全部绘图数据表（文件名 -> 表）"""
    frames = {
        OUTPUTS_FILE: outputs_frame(report),
        TRACE_PROFILE_FILE: trace_profile_frame(report),
        SWEEP_FILE: sweep_frame(report),
    }
    return {name: frame for name, frame in frames.items() if frame is not None}


@dataclass
class StagedOutputs:
    """待提交的输出文件：目标路径 -> 临时文件"""
    staged: Dict[Path, Path] = field(default_factory=dict)

    def add(self, target: Union[str, Path], content: str) -> None:
        target = Path(target)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            descriptor, temporary = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
            with os.fdopen(descriptor, "w", encoding="utf-8", newline="") as handle:
                handle.write(content)
        except OSError as exc:
            self.discard()
            raise OutputWriteException(f"无法写入 {target}: {exc.strerror or exc}", details={"path": str(target)})
        self.staged[target] = Path(temporary)

    def commit(self) -> List[Path]:
        """
        把全部临时文件替换到目标路径

        已存在的目标先移到同目录的备份文件；任一替换失败时，已替换的目标恢复为原内容（原来不存在的删除），
        其余临时文件丢弃。

        Raises:
            OutputWriteException: 替换失败（目标路径保持提交前的状态）
        """
        replaced: List[Tuple[Path, Optional[Path]]] = []
        try:
            for target, temporary in self.staged.items():
                backup = self._backup(target)
                try:
                    os.replace(temporary, target)
                except OSError:
                    if backup is not None:
                        os.replace(backup, target)
                    raise
                replaced.append((target, backup))
        except OSError as exc:
            self._rollback(replaced)
            self.discard()
            raise OutputWriteException(f"无法替换输出文件: {exc.strerror or exc}")
        self.staged.clear()
        for target, backup in replaced:
            if backup is not None:
                backup.unlink(missing_ok=True)
            logger.info(f"已写入: {target}")
        return [target for target, _ in replaced]

    @staticmethod
    def _backup(target: Path) -> Optional[Path]:
        if not target.exists():
            return None
        descriptor, backup = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".bak", dir=target.parent)
        os.close(descriptor)
        try:
            os.replace(target, backup)
        except OSError:
            Path(backup).unlink(missing_ok=True)
            raise
        return Path(backup)

    @staticmethod
    def _rollback(replaced: List[Tuple[Path, Optional[Path]]]) -> None:
        for target, backup in reversed(replaced):
            try:
                if backup is None:
                    target.unlink(missing_ok=True)
                else:
                    os.replace(backup, target)
            except OSError as exc:
                logger.error(f"回滚 {target} 失败: {exc}")
        logger.warning(f"输出替换失败，已回滚 {len(replaced)} 个文件")

    def discard(self) -> None:
        for temporary in self.staged.values():
            try:
                temporary.unlink()
            except FileNotFoundError:
                pass
        self.staged.clear()


def stage_plot_data(report: Report, directory: Union[str, Path], staged: StagedOutputs) -> List[Path]:
    directory = Path(directory)
    frames = plot_frames(report)
    if not frames:
        logger.warning("报告中没有可输出的绘图数据")
    targets = []
    for name, frame in frames.items():
        staged.add(directory / name, frame.to_csv(index=False, lineterminator="\n"))
        targets.append(directory / name)
    return targets


def emit_plot_data(report: Report, directory: Union[str, Path]) -> List[Path]:
    """
    写出绘图数据表（CSV，固定表头）

    Args:
        report: 报告
        directory: 输出目录

    Returns:
        写出的文件路径

    Raises:
        OutputWriteException: 目录不可写
    """
    staged = StagedOutputs()
    stage_plot_data(report, directory, staged)
    return staged.commit()


def write_report(report: Report, path: Union[str, Path], plots: Optional[Union[str, Path]] = None) -> List[Path]:
    """
    原子写出报告JSON（以及可选的绘图数据）

    Raises:
        OutputWriteException: 任一文件写入失败（此时不留下任何输出文件）
    """
    staged = StagedOutputs()
    staged.add(path, render_report(report))
    if plots is not None:
        stage_plot_data(report, plots, staged)
    return staged.commit()

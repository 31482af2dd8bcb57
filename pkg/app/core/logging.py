"""
日志配置模块

日志只写到标准错误（标准输出留给报告）；可选的文件日志按行写 JSON。
每条日志带 command 字段，由 command_context 在命令执行期间设置。
"""
import sys
import logging
from pathlib import Path
from typing import Optional

from loguru import logger
from app.core.config import settings

CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> | "
    "<level>{level: <8}</level> | "
    "<magenta>{extra[command]}</magenta> | "
    "<cyan>{name}</cyan>:<cyan>{line}</cyan> | "
    "<level>{message}</level>"
)


class InterceptHandler(logging.Handler):
    """拦截标准库日志（含 warnings 模块的数值警告）并重定向到loguru"""

    def emit(self, record):
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        # 跳过 logging 自身的栈帧
        frame, depth = logging.currentframe(), 2
        while frame and frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def setup_logging(level: Optional[str] = None):
    """
    设置日志输出

    Args:
        level: 日志级别，省略时取 settings.LOG_LEVEL（命令行 --log-level 会传入）
    """
    level = level or settings.LOG_LEVEL
    logger.remove()
    logger.configure(extra={"command": "-"})

    logger.add(
        sys.stderr,
        format=CONSOLE_FORMAT,
        level=level,
        colorize=None,
        backtrace=settings.DEBUG,
        diagnose=settings.DEBUG,
    )

    if settings.LOG_FILE:
        Path(settings.LOG_FILE).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            settings.LOG_FILE,
            level=level,
            serialize=True,
            rotation=settings.LOG_MAX_SIZE,
            retention=settings.LOG_BACKUP_COUNT,
            compression="zip",
            diagnose=settings.DEBUG,
        )

    logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)
    logging.captureWarnings(True)


def command_context(command: str):
    """在 with 块内给所有日志附加 command 字段"""
    return logger.contextualize(command=command)


def get_logger(name: str = None):
    """获取logger实例"""
    if name:
        return logger.bind(name=name)
    return logger


setup_logging()

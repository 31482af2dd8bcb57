"""
自定义异常类和异常处理

每个异常携带CLI退出码：2 场景无效，3 数值失败或输出失败，4 内部不变量被破坏。
"""
from typing import Any, Dict, Optional
from app.core.logging import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID_SCENARIO = 2
EXIT_NUMERICAL_FAILURE = 3
EXIT_INTERNAL_ERROR = 4


class BaseCustomException(Exception):
    """自定义异常基类"""

    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_INTERNAL_ERROR,
        details: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)


class InvalidArgumentException(BaseCustomException):
    """参数不合法（索引不可取、点在区域外、时间为负等）"""

    def __init__(self, message: str, exit_code: int = EXIT_INVALID_SCENARIO, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code, details)


class ScenarioParseException(BaseCustomException):
    """场景文件解析失败（带行列位置）"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None, exit_code: int = EXIT_INVALID_SCENARIO):
        super().__init__(message, exit_code, {"line": line, "column": column})
        self.line = line
        self.column = column


class ScenarioValidationException(BaseCustomException):
    """场景内容违反约束（指明字段和不变量）"""

    def __init__(self, message: str, field: Optional[str] = None, exit_code: int = EXIT_INVALID_SCENARIO, details: Optional[Dict[str, Any]] = None):
        merged = {"field": field}
        merged.update(details or {})
        super().__init__(message, exit_code, merged)
        self.field = field


class NumericalFailureException(BaseCustomException):
    """数值计算失败（例如Bessel零点无法括住）"""

    def __init__(self, message: str, exit_code: int = EXIT_NUMERICAL_FAILURE, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code, details)


class OutputWriteException(BaseCustomException):
    """输出文件写入失败"""

    def __init__(self, message: str, exit_code: int = EXIT_NUMERICAL_FAILURE, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code, details)


class InvariantViolationException(BaseCustomException):
    """内部不变量被破坏"""

    def __init__(self, message: str, exit_code: int = EXIT_INTERNAL_ERROR, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code, details)


def handle_exception(exc: BaseException) -> int:
    """
    记录异常并映射为CLI退出码

    Args:
        exc: 捕获到的异常

    Returns:
        退出码
    """
    if isinstance(exc, BaseCustomException):
        logger.bind(details=exc.details).error(f"{type(exc).__name__}: {exc.message}")
        return exc.exit_code

    logger.exception(f"未处理的异常: {str(exc)}")
    return EXIT_INTERNAL_ERROR

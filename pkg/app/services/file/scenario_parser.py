"""
场景文件解析 - JSON 文本到已校验的 ScenarioConfig

语法错误给出行列位置；约束错误指明字段路径与被违反的约束。
几何包含关系（传感器位置、支撑集、边界段）在任何计算之前检查。
"""
import json
from pathlib import Path
from typing import Any, Union

from pydantic import ValidationError

from app.core.exceptions import InvalidArgumentException, ScenarioParseException, ScenarioValidationException
from app.core.logging import get_logger
from app.models.geometry import validate_boundary_point, validate_domain_point, validate_region, validate_support
from app.models.scenario import ScenarioConfig
from app.models.sensor import BoundaryPointwise, BoundaryZone, Filament, InternalPointwise, InternalZone

logger = get_logger(__name__)


def _field_path(location) -> str:
    parts = []
    for item in location:
        if isinstance(item, int):
            parts.append(f"[{item}]")
        else:
            parts.append(("." if parts else "") + str(item))
    return "".join(parts)


def _validation_error(exc: ValidationError) -> ScenarioValidationException:
    errors = exc.errors(include_url=False)
    first = errors[0]
    field = _field_path(first.get("loc", ()))
    message = f"场景字段 {field or '<root>'} 不合法: {first.get('msg')}"
    return ScenarioValidationException(
        message,
        field=field or None,
        details={"errors": [{"field": _field_path(e.get("loc", ())), "message": e.get("msg")} for e in errors]},
    )


def validate_sensor_geometry(domain, sensor) -> None:
    """
    检查传感器几何位于对应集合内

    Raises:
        InvalidArgumentException: 位置或支撑集不在Ω（或∂Ω）内
    """
    if isinstance(sensor, InternalPointwise):
        validate_domain_point(domain, sensor.location)
    elif isinstance(sensor, BoundaryPointwise):
        validate_boundary_point(domain, sensor.location)
    elif isinstance(sensor, InternalZone):
        validate_support(domain, sensor.support)
    elif isinstance(sensor, BoundaryZone):
        validate_region(domain, sensor.support)
    elif isinstance(sensor, Filament):
        for point in sensor.points:
            validate_domain_point(domain, point)


def _sensor_field(sensor) -> str:
    if isinstance(sensor, (InternalPointwise, BoundaryPointwise)):
        return "location"
    if isinstance(sensor, Filament):
        return "points"
    return "support"


def validate_geometry(config: ScenarioConfig) -> ScenarioConfig:
    """
    场景的几何一致性检查

    Raises:
        ScenarioValidationException: 指明出错的字段
    """
    try:
        validate_region(config.domain, config.region)
    except InvalidArgumentException as exc:
        raise ScenarioValidationException(exc.message, field="region", details=exc.details)

    for number, sensor in enumerate(config.sensors):
        try:
            validate_sensor_geometry(config.domain, sensor)
        except InvalidArgumentException as exc:
            raise ScenarioValidationException(
                f"传感器 {sensor.name}: {exc.message}",
                field=f"sensors[{number}].{_sensor_field(sensor)}",
                details=exc.details,
            )
    return config


def parse_scenario(text: str) -> ScenarioConfig:
    """
    解析场景文本

    Args:
        text: JSON 文本

    Returns:
        补全默认值并通过几何检查的 ScenarioConfig

    Raises:
        ScenarioParseException: 文本不是合法JSON（带行列位置）
        ScenarioValidationException: 字段违反约束（指明字段）
    """
    try:
        data: Any = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseException(f"场景文件不是合法的JSON: {exc.msg}", line=exc.lineno, column=exc.colno)
    if not isinstance(data, dict):
        raise ScenarioParseException("场景文件的顶层必须是JSON对象", line=1, column=1)

    try:
        config = ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        raise _validation_error(exc)

    validate_geometry(config)
    logger.debug(f"场景解析完成: {config.domain.kind}, 传感器 {len(config.sensors)} 个")
    return config


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """读取并解析场景文件"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioParseException(f"无法读取场景文件 {path}: {exc.strerror or exc}")
    logger.info(f"读取场景文件: {path}")
    return parse_scenario(text)


def dump_scenario(config: ScenarioConfig) -> str:
    """场景序列化为JSON（精确坐标写成 "p/q" 字符串）"""
    return json.dumps(config.model_dump(mode="json"), ensure_ascii=False, indent=2)

"""
数据模型包 - 几何、传感器、场景与报告
"""
from .geometry import (
    BoundaryRegion,
    BoundarySegment,
    Coordinate,
    DiscDomain,
    Domain,
    Edge,
    PlanarSupport,
    RectangleDomain,
)
from .report import Report, StrategicReport
from .scenario import ScenarioConfig
from .sensor import BoundaryPointwise, BoundaryZone, Filament, InternalPointwise, InternalZone, Sensor

__all__ = [
    "BoundaryRegion",
    "BoundarySegment",
    "Coordinate",
    "DiscDomain",
    "Domain",
    "Edge",
    "PlanarSupport",
    "RectangleDomain",
    "Report",
    "StrategicReport",
    "ScenarioConfig",
    "BoundaryPointwise",
    "BoundaryZone",
    "Filament",
    "InternalPointwise",
    "InternalZone",
    "Sensor",
]

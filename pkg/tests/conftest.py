"""
测试公共夹具
"""
import math
import os
from typing import Any, Dict

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from app.models.geometry import BoundaryRegion, DiscDomain, RectangleDomain
from app.services.boundary.quadrature import QuadratureRule
from app.services.spectral.modes import enumerate_modes

hypothesis_settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=20,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
hypothesis_settings.register_profile(
    "dev", max_examples=50, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture]
)
hypothesis_settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))

FIVE_PI_SQUARED = -5.0 * math.pi ** 2


@pytest.fixture
def unit_square() -> RectangleDomain:
    return RectangleDomain.model_validate({"kind": "rectangle", "a1": "1", "a2": "1"})


@pytest.fixture
def unit_disc() -> DiscDomain:
    return DiscDomain.model_validate({"kind": "disc", "radius": "1"})


@pytest.fixture
def south_edge() -> BoundaryRegion:
    return BoundaryRegion.single("south", 0, 1)


@pytest.fixture
def rule() -> QuadratureRule:
    """测试用的较小求积规则（每段32个节点）"""
    return QuadratureRule(nodes_per_panel=16, panels_per_segment=2)


@pytest.fixture
def square_basis(unit_square):
    def build(cutoff: int = 2, **kwargs):
        return enumerate_modes(unit_square, cutoff, **kwargs)

    return build


def scenario_dict(**overrides: Any) -> Dict[str, Any]:
    """单位正方形、Γ = 南边、两个点传感器的基础场景"""
    scenario: Dict[str, Any] = {
        "domain": {"kind": "rectangle", "a1": "1", "a2": "1"},
        "region": {"segments": [{"edge": "south", "lo": "0", "hi": "1"}]},
        "sensors": [
            {"kind": "internal_pointwise", "name": "s1", "location": ["23/100", "57/100"]},
            {"kind": "internal_pointwise", "name": "s2", "location": ["41/100", "13/100"]},
        ],
        "truncation": {"rectangle_cutoff": 2},
        "tolerances": {"nodes_per_panel": 16, "panels_per_segment": 2},
    }
    scenario.update(overrides)
    return scenario


@pytest.fixture
def scenario_factory():
    return scenario_dict

"""
边界服务包 - 求积、迹与Γ上的试探函数基
"""
from .gamma_basis import (
    GammaBasis,
    RestrictedGammaBasis,
    build_gamma_basis,
    gamma_basis,
    max_gamma_size,
    restricted_gamma_basis,
)
from .quadrature import QuadratureRule, integrate_interval
from .trace import (
    BoundaryPoint,
    RegionNodes,
    boundary_complement,
    boundary_length,
    integrate_boundary,
    integrate_boundary_native,
    integrate_planar,
    locate,
    mode_trace_matrix,
    region_nodes,
    restricted_mode_gram,
    restriction_norms,
    trace_value,
)

__all__ = [
    "GammaBasis",
    "RestrictedGammaBasis",
    "build_gamma_basis",
    "gamma_basis",
    "max_gamma_size",
    "restricted_gamma_basis",
    "QuadratureRule",
    "integrate_interval",
    "BoundaryPoint",
    "RegionNodes",
    "boundary_complement",
    "boundary_length",
    "integrate_boundary",
    "integrate_boundary_native",
    "integrate_planar",
    "locate",
    "mode_trace_matrix",
    "region_nodes",
    "restricted_mode_gram",
    "restriction_norms",
    "trace_value",
]

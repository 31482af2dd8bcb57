"""
特征系统服务包
"""
from .bessel import bessel_j, bessel_j_prime, bessel_zero
from .modes import (
    Mode,
    ModeBasis,
    ModeGroup,
    ModeIndex,
    eigenfunction_value,
    eigenvalue,
    enumerate_modes,
    mode_values,
    norm_constant,
)
from .semigroup import decay_matrix, semigroup_apply

__all__ = [
    "bessel_j",
    "bessel_j_prime",
    "bessel_zero",
    "Mode",
    "ModeBasis",
    "ModeGroup",
    "ModeIndex",
    "eigenfunction_value",
    "eigenvalue",
    "enumerate_modes",
    "mode_values",
    "norm_constant",
    "decay_matrix",
    "semigroup_apply",
]

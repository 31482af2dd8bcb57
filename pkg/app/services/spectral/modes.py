"""
Neumann Laplace算子的特征系统 - 模态指标、特征值、特征函数与按特征值分组的截断基

矩形 [0,a1]×[0,a2]：φ_ij = N cos(iπξ1/a1) cos(jπξ2/a2)，λ_ij = −π²(i²/a1² + j²/a2²)。
圆盘（半径a，极坐标）：φ = N J_i(βr/a)·{1, cos iθ, sin iθ}，λ = −(β/a)²，
β 取 J_i′ 的零点（neumann族，默认）或 J_i 的零点（dirichlet族，字面形式）。
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.config import settings
from app.core.exceptions import InvalidArgumentException
from app.core.logging import get_logger
from app.models.geometry import DiscDomain, RectangleDomain
from app.services.spectral.bessel import bessel_j, bessel_zero

logger = get_logger(__name__)

FAMILY_ORDER: Dict[str, int] = {"rectangle": 0, "axial": 1, "cosine": 2, "sine": 3}
DISC_FAMILIES = ("axial", "cosine", "sine")


@dataclass(frozen=True, order=True)
class ModeIndex:
    """模态指标：矩形为 (i, j)；圆盘为 (族, 角向阶数i, 径向阶数j)"""
    family: str
    i: int
    j: int

    @property
    def label(self) -> str:
        if self.family == "rectangle":
            return f"({self.i},{self.j})"
        return f"{self.family}({self.i},{self.j})"

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return FAMILY_ORDER.get(self.family, 99), self.i, self.j

    @classmethod
    def rectangle(cls, i: int, j: int) -> "ModeIndex":
        return cls("rectangle", i, j)


@dataclass(frozen=True)
class Mode:
    """截断基中的一个模态"""
    index: ModeIndex
    eigenvalue: float
    norm_constant: float
    radial_root: float = 0.0


@dataclass(frozen=True)
class ModeGroup:
    """共享同一特征值的模态组"""
    eigenvalue: float
    members: Tuple[Mode, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.members)

    @property
    def labels(self) -> List[str]:
        return [mode.index.label for mode in self.members]


@dataclass(frozen=True)
class ModeBasis:
    """按特征值递减排序并分组的截断特征基"""
    domain: Union[RectangleDomain, DiscDomain]
    cutoff: Tuple[int, ...]
    groups: Tuple[ModeGroup, ...]
    radial_family: str = "neumann"
    normalization: str = "l2"
    group_tolerance: float = 1e-9
    _positions: Dict[ModeIndex, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        for position, mode in enumerate(self.modes):
            self._positions[mode.index] = position

    @property
    def modes(self) -> List[Mode]:
        return [mode for group in self.groups for mode in group.members]

    @property
    def size(self) -> int:
        return sum(group.multiplicity for group in self.groups)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([mode.eigenvalue for mode in self.modes], dtype=float)

    @property
    def max_multiplicity(self) -> int:
        return max((group.multiplicity for group in self.groups), default=0)

    def group_slices(self) -> List[slice]:
        """每个组在模态向量中的位置区间"""
        slices = []
        start = 0
        for group in self.groups:
            slices.append(slice(start, start + group.multiplicity))
            start += group.multiplicity
        return slices

    def position(self, index: ModeIndex) -> int:
        if index not in self._positions:
            raise InvalidArgumentException(f"模态 {index.label} 不在截断基中")
        return self._positions[index]

    def find_group(self, eigenvalue: float) -> Optional[int]:
        """按特征值查找组序号"""
        for number, group in enumerate(self.groups):
            if abs(group.eigenvalue - eigenvalue) <= self.group_tolerance * (1.0 + abs(eigenvalue)):
                return number
        return None


def check_index(domain, index: ModeIndex) -> None:
    """检查模态指标对区域是否可取"""
    if index.i < 0 or index.j < 0:
        raise InvalidArgumentException(f"模态指标必须非负: {index.label}")
    if isinstance(domain, RectangleDomain):
        if index.family != "rectangle":
            raise InvalidArgumentException(f"矩形区域的模态族只能是 rectangle: {index.label}")
        return
    if index.family not in DISC_FAMILIES:
        raise InvalidArgumentException(f"圆盘区域的模态族只能是 axial/cosine/sine: {index.label}")
    if index.j < 1:
        raise InvalidArgumentException(f"圆盘径向阶数必须 ≥ 1: {index.label}")
    if index.family == "axial" and index.i != 0:
        raise InvalidArgumentException(f"axial 族的角向阶数必须为0: {index.label}")
    if index.family in ("cosine", "sine") and index.i < 1:
        raise InvalidArgumentException(f"{index.family} 族的角向阶数必须 ≥ 1: {index.label}")


def radial_root(index: ModeIndex, radial_family: str) -> float:
    """
    圆盘模态的径向常数β

    neumann族：axial j=1 为常数模态（β=0），j≥2 取 J_0′ 的第 j−1 个正零点；cosine/sine 取 J_i′ 的第j个零点。
    dirichlet族：取 J_i 的第j个零点。
    """
    if radial_family == "dirichlet":
        return bessel_zero(index.i, index.j, "j")
    if radial_family != "neumann":
        raise InvalidArgumentException(f"未知的径向常数族: {radial_family}")
    if index.family == "axial":
        if index.j == 1:
            return 0.0
        return bessel_zero(0, index.j - 1, "jp")
    return bessel_zero(index.i, index.j, "jp")


def eigenvalue(domain, index: ModeIndex, radial_family: Optional[str] = None) -> float:
    """
    特征值λ

    Args:
        domain: 区域
        index: 模态指标
        radial_family: 圆盘径向常数族（默认取配置）

    Returns:
        λ ≤ 0
    """
    check_index(domain, index)
    if isinstance(domain, RectangleDomain):
        a1, a2 = domain.lengths
        if index.i == 0 and index.j == 0:
            return 0.0
        return -math.pi ** 2 * (index.i ** 2 / a1 ** 2 + index.j ** 2 / a2 ** 2)
    beta = radial_root(index, radial_family or settings.DISC_RADIAL_FAMILY)
    if beta == 0.0:
        return 0.0
    return -(beta / domain.a) ** 2


def norm_constant(domain, index: ModeIndex, radial_family: Optional[str] = None, normalization: Optional[str] = None) -> float:
    """使特征函数在 L²(Ω) 中单位范数的常数；h1 归一化再乘 (1 − λ)^(−1/2)"""
    check_index(domain, index)
    radial_family = radial_family or settings.DISC_RADIAL_FAMILY
    normalization = normalization or settings.NORMALIZATION

    if isinstance(domain, RectangleDomain):
        constant = 1.0
        for k, length in ((index.i, float(domain.a1)), (index.j, float(domain.a2))):
            constant *= math.sqrt((1.0 if k == 0 else 2.0) / length)
    else:
        a = domain.a
        beta = radial_root(index, radial_family)
        angular = 2.0 * math.pi if index.family == "axial" else math.pi
        if radial_family == "dirichlet":
            radial = 0.5 * a ** 2 * bessel_j(index.i + 1, beta) ** 2
        elif index.family == "axial":
            radial = 0.5 * a ** 2 * bessel_j(0, beta) ** 2
        else:
            radial = 0.5 * a ** 2 * (1.0 - index.i ** 2 / beta ** 2) * bessel_j(index.i, beta) ** 2
        constant = 1.0 / math.sqrt(angular * radial)

    if normalization == "h1":
        constant /= math.sqrt(1.0 - eigenvalue(domain, index, radial_family))
    elif normalization != "l2":
        raise InvalidArgumentException(f"未知的归一化方式: {normalization}")
    return constant


def build_mode(domain, index: ModeIndex, radial_family: Optional[str] = None, normalization: Optional[str] = None) -> Mode:
    radial_family = radial_family or settings.DISC_RADIAL_FAMILY
    beta = 0.0 if isinstance(domain, RectangleDomain) else radial_root(index, radial_family)
    return Mode(
        index=index,
        eigenvalue=eigenvalue(domain, index, radial_family),
        norm_constant=norm_constant(domain, index, radial_family, normalization),
        radial_root=beta,
    )


def mode_values(domain, mode: Mode, u, v) -> np.ndarray:
    """在原生坐标 (u, v) 处求特征函数值（数组运算，不做包含性检查）"""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    index = mode.index
    if isinstance(domain, RectangleDomain):
        a1, a2 = domain.lengths
        return mode.norm_constant * np.cos(index.i * np.pi * u / a1) * np.cos(index.j * np.pi * v / a2)

    radial = bessel_j(index.i, np.clip(mode.radial_root * u / domain.a, 0.0, None))
    if index.family == "axial":
        angular = np.ones_like(v)
    elif index.family == "cosine":
        angular = np.cos(index.i * v)
    else:
        angular = np.sin(index.i * v)
    return mode.norm_constant * radial * angular


def eigenfunction_value(domain, index: ModeIndex, point: Sequence[float],
                        radial_family: Optional[str] = None, normalization: Optional[str] = None) -> float:
    """
    在Ω闭包内一点求特征函数值

    Args:
        domain: 区域
        index: 模态指标
        point: 原生坐标（矩形 (ξ1, ξ2)，圆盘 (r, θ)）

    Returns:
        φ(point)
    """
    u, v = float(point[0]), float(point[1])
    if not domain.contains(u, v):
        raise InvalidArgumentException(f"点 ({u}, {v}) 不在Ω的闭包内", details={"point": [u, v]})
    mode = build_mode(domain, index, radial_family, normalization)
    return float(mode_values(domain, mode, u, v))


def _admissible_indices(domain, cutoff: Tuple[int, ...]) -> List[ModeIndex]:
    if isinstance(domain, RectangleDomain):
        max_i = cutoff[0]
        max_j = cutoff[1] if len(cutoff) > 1 else cutoff[0]
        return [ModeIndex.rectangle(i, j) for i in range(max_i + 1) for j in range(max_j + 1)]

    angular, radial = cutoff
    indices = [ModeIndex("axial", 0, j) for j in range(1, radial + 1)]
    for i in range(1, angular + 1):
        for j in range(1, radial + 1):
            indices.append(ModeIndex("cosine", i, j))
            indices.append(ModeIndex("sine", i, j))
    return indices


def normalize_cutoff(domain, cutoff: Union[None, int, Sequence[int]]) -> Tuple[int, ...]:
    """把截断参数规整为元组并检查取值"""
    if isinstance(domain, RectangleDomain):
        if cutoff is None:
            cutoff = (settings.RECTANGLE_CUTOFF,)
        elif isinstance(cutoff, int):
            cutoff = (cutoff,)
        cutoff = tuple(int(c) for c in cutoff)
        if len(cutoff) not in (1, 2) or any(c < 0 for c in cutoff):
            raise InvalidArgumentException(f"矩形截断必须是非负整数: {cutoff}")
        return cutoff

    if cutoff is None:
        cutoff = (settings.DISC_ANGULAR_CUTOFF, settings.DISC_RADIAL_CUTOFF)
    elif isinstance(cutoff, int):
        cutoff = (cutoff, cutoff)
    cutoff = tuple(int(c) for c in cutoff)
    if len(cutoff) != 2 or cutoff[0] < 0 or cutoff[1] < 1:
        raise InvalidArgumentException(f"圆盘截断需要 (角向 ≥ 0, 径向 ≥ 1): {cutoff}")
    return cutoff


def enumerate_modes(domain, cutoff=None, radial_family: Optional[str] = None, normalization: Optional[str] = None,
                    group_tolerance: Optional[float] = None) -> ModeBasis:
    """
    枚举截断特征基并按特征值分组

    两个模态同组当且仅当 |λ − λ′| ≤ ε_group·(1 + |λ|)；组按λ递减排序，组内按 (族, i, j) 排序。

    Args:
        domain: 区域
        cutoff: 矩形为每个方向的最大指标，圆盘为 (最大角向阶数, 最大径向阶数)
        radial_family: 圆盘径向常数族
        normalization: 归一化方式
        group_tolerance: 分组容差

    Returns:
        ModeBasis
    """
    cutoff = normalize_cutoff(domain, cutoff)
    radial_family = radial_family or settings.DISC_RADIAL_FAMILY
    normalization = normalization or settings.NORMALIZATION
    tolerance = settings.GROUP_TOLERANCE if group_tolerance is None else group_tolerance

    modes = [build_mode(domain, index, radial_family, normalization) for index in _admissible_indices(domain, cutoff)]
    modes.sort(key=lambda mode: (-mode.eigenvalue, mode.index.sort_key))

    groups: List[ModeGroup] = []
    current: List[Mode] = []
    anchor = None
    for mode in modes:
        if anchor is not None and abs(mode.eigenvalue - anchor) <= tolerance * (1.0 + abs(anchor)):
            current.append(mode)
            continue
        if current:
            groups.append(ModeGroup(anchor, tuple(sorted(current, key=lambda m: m.index.sort_key))))
        anchor = mode.eigenvalue
        current = [mode]
    if current:
        groups.append(ModeGroup(anchor, tuple(sorted(current, key=lambda m: m.index.sort_key))))

    basis = ModeBasis(
        domain=domain,
        cutoff=cutoff,
        groups=tuple(groups),
        radial_family=radial_family,
        normalization=normalization,
        group_tolerance=tolerance,
    )
    logger.debug(f"截断基构建完成: {domain.kind}, cutoff={cutoff}, M={basis.size}, 组数={len(groups)}, r={basis.max_multiplicity}")
    return basis

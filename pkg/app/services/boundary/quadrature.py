"""
复合Gauss-Legendre求积
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from app.core.config import settings
from app.core.exceptions import InvalidArgumentException


@lru_cache(maxsize=32)
def reference_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@dataclass(frozen=True)
class QuadratureRule:
    """复合Gauss-Legendre规则：每段分成若干等宽面板，每个面板使用固定数量的节点"""
    nodes_per_panel: int = 32
    panels_per_segment: int = 4

    def __post_init__(self):
        if self.nodes_per_panel < 2 or self.panels_per_segment < 1:
            raise InvalidArgumentException(
                f"求积参数不合法: nodes_per_panel={self.nodes_per_panel}, panels_per_segment={self.panels_per_segment}"
            )

    @classmethod
    def from_settings(cls) -> "QuadratureRule":
        return cls(settings.QUADRATURE_NODES_PER_PANEL, settings.QUADRATURE_PANELS_PER_SEGMENT)

    @property
    def nodes_per_segment(self) -> int:
        return self.nodes_per_panel * self.panels_per_segment

    def refined(self) -> "QuadratureRule":
        """面板数加倍的规则（用于收敛检查）"""
        return QuadratureRule(self.nodes_per_panel, 2 * self.panels_per_segment)

    def interval(self, lo: float, hi: float) -> Tuple[np.ndarray, np.ndarray]:
        """
        区间 [lo, hi] 上的节点与权重

        Returns:
            (nodes, weights)，节点按升序排列
        """
        if not hi > lo:
            raise InvalidArgumentException(f"求积区间必须满足 lo < hi: [{lo}, {hi}]")
        ref_nodes, ref_weights = reference_rule(self.nodes_per_panel)
        edges = np.linspace(lo, hi, self.panels_per_segment + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        nodes = (mid[:, None] + half[:, None] * ref_nodes[None, :]).ravel()
        weights = (half[:, None] * ref_weights[None, :]).ravel()
        return nodes, weights


def resolve_rule(rule: Optional[QuadratureRule]) -> QuadratureRule:
    return rule if rule is not None else QuadratureRule.from_settings()


def integrate_interval(integrand: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                       rule: Optional[QuadratureRule] = None) -> float:
    """一维区间上的积分"""
    nodes, weights = resolve_rule(rule).interval(lo, hi)
    return float(np.dot(weights, integrand(nodes)))

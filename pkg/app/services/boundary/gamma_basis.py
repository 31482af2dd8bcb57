"""
Γ 上的正交试探函数基

cosine：弧长余弦族 cos(kπs/L)，k = 0..K−1，在边界求积内积下QR正交化。
restricted：span{ψ_m} 在Γ上的正交基，由限制Gram矩阵的特征分解得到，规模由截断决定。
"""
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from app.core.config import settings
from app.core.exceptions import InvalidArgumentException, NumericalFailureException
from app.core.logging import get_logger
from app.models.geometry import BoundaryRegion
from app.services.boundary.quadrature import QuadratureRule, resolve_rule
from app.services.boundary.trace import RegionNodes, mode_trace_matrix, region_nodes
from app.services.spectral.modes import ModeBasis

logger = get_logger(__name__)

GammaBasisKind = Literal["cosine", "restricted"]


@dataclass(frozen=True)
class GammaBasis:
    """Γ 上的正交函数族 e_1..e_K（节点值形式）"""
    region: BoundaryRegion
    kind: GammaBasisKind
    nodes: RegionNodes
    values: np.ndarray

    @property
    def size(self) -> int:
        return int(self.values.shape[1])

    def gram(self) -> np.ndarray:
        return self.values.T @ (self.nodes.weights[:, None] * self.values)

    def pairings(self, traces: np.ndarray) -> np.ndarray:
        """⟨ψ_m, e_k⟩_{L²(Γ)}，traces 为 (节点数 × M)，返回 (M × K)"""
        return traces.T @ (self.nodes.weights[:, None] * self.values)

    def coefficients(self, samples: np.ndarray) -> np.ndarray:
        """节点值函数在本基下的系数"""
        return self.values.T @ (self.nodes.weights * samples)

    def sobolev_weights(self) -> np.ndarray:
        """加权代理范数的权重 (1 + k)^{1/2}"""
        return np.sqrt(1.0 + np.arange(self.size, dtype=float))


def _fix_signs(matrix: np.ndarray) -> np.ndarray:
    """每列绝对值最大的元素取正，保证结果确定"""
    if matrix.size == 0:
        return matrix
    pivots = matrix[np.argmax(np.abs(matrix), axis=0), np.arange(matrix.shape[1])]
    signs = np.where(pivots < 0, -1.0, 1.0)
    return matrix * signs[None, :]


def max_gamma_size(rule: QuadratureRule) -> int:
    """余弦基允许的最大规模（每段节点数的一半）"""
    return rule.nodes_per_segment // 2


def gamma_basis(domain, region: BoundaryRegion, size: int, rule: Optional[QuadratureRule] = None) -> GammaBasis:
    """
    构造Γ上大小为K的正交余弦基

    Args:
        domain: 区域
        region: 边界子区域
        size: K ≥ 1
        rule: 求积规则

    Raises:
        InvalidArgumentException: K < 1 或超过求积分辨率
    """
    rule = resolve_rule(rule)
    if size < 1:
        raise InvalidArgumentException(f"试探函数个数必须 ≥ 1: {size}")
    if size > max_gamma_size(rule):
        raise InvalidArgumentException(
            f"试探函数个数 {size} 超过求积分辨率允许的 {max_gamma_size(rule)}",
            details={"size": size, "limit": max_gamma_size(rule)},
        )

    nodes = region_nodes(domain, region, rule)
    frequencies = np.arange(size, dtype=float)
    raw = np.cos(np.pi * np.outer(nodes.arc_length, frequencies) / nodes.total_length)
    root_weights = np.sqrt(nodes.weights)
    q, r = np.linalg.qr(root_weights[:, None] * raw)
    diagonal = np.diag(r)
    if np.min(np.abs(diagonal)) <= settings.RANK_TOLERANCE * np.max(np.abs(diagonal)):
        raise NumericalFailureException("余弦基在当前求积下线性相关", details={"size": size})
    q = q * np.sign(diagonal)[None, :]
    values = q / root_weights[:, None]
    logger.debug(f"余弦试探基构建完成: K={size}, 节点数={nodes.count}")
    return GammaBasis(region=region, kind="cosine", nodes=nodes, values=values)


@dataclass(frozen=True)
class RestrictedGammaBasis(GammaBasis):
    """span{ψ_m} 的正交基，附带 ⟨ψ_m, e_k⟩ 矩阵"""
    mode_pairings: Optional[np.ndarray] = None
    spectrum: Optional[np.ndarray] = None


def restricted_gamma_basis(basis: ModeBasis, region: BoundaryRegion, rule: Optional[QuadratureRule] = None,
                           tolerance: Optional[float] = None) -> RestrictedGammaBasis:
    """
    由限制在Γ上的模态迹构造正交基

    对Gram矩阵 G = V diag(μ) Vᵀ，保留 μ_k > ε·max μ 的方向，e_k = Σ_m V_mk ψ_m / √μ_k，
    从而 ⟨ψ_m, e_k⟩ = V_mk √μ_k。

    Returns:
        RestrictedGammaBasis（K 可能为0，当Γ上所有迹均为零时）
    """
    tolerance = settings.RANK_TOLERANCE if tolerance is None else tolerance
    nodes = region_nodes(basis.domain, region, resolve_rule(rule))
    traces = mode_trace_matrix(basis, nodes)
    gram = traces.T @ (nodes.weights[:, None] * traces)
    gram = 0.5 * (gram + gram.T)

    eigenvalues, eigenvectors = np.linalg.eigh(gram)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = eigenvalues[order]
    eigenvectors = _fix_signs(eigenvectors[:, order])
    top = eigenvalues[0] if eigenvalues.size else 0.0
    keep = eigenvalues > tolerance * top if top > 0 else np.zeros_like(eigenvalues, dtype=bool)

    mu = eigenvalues[keep]
    vectors = eigenvectors[:, keep]
    values = traces @ vectors / np.sqrt(mu)[None, :] if mu.size else np.zeros((nodes.count, 0))
    pairings = vectors * np.sqrt(mu)[None, :] if mu.size else np.zeros((basis.size, 0))
    logger.debug(f"限制试探基构建完成: K={mu.size}（M={basis.size}）")
    return RestrictedGammaBasis(
        region=region,
        kind="restricted",
        nodes=nodes,
        values=values,
        mode_pairings=pairings,
        spectrum=mu,
    )


def build_gamma_basis(basis: ModeBasis, region: BoundaryRegion, kind: GammaBasisKind = "restricted",
                      size: Optional[int] = None, rule: Optional[QuadratureRule] = None,
                      tolerance: Optional[float] = None) -> GammaBasis:
    """按类型构造试探基；cosine 未给出K时取 2×Γ上不同频率数（不超过分辨率上限）"""
    rule = resolve_rule(rule)
    if kind == "restricted":
        return restricted_gamma_basis(basis, region, rule, tolerance)
    if kind != "cosine":
        raise InvalidArgumentException(f"未知的试探基类型: {kind}")
    if size is None:
        size = default_cosine_size(basis, region, rule, tolerance)
    return gamma_basis(basis.domain, region, size, rule)


def default_cosine_size(basis: ModeBasis, region: BoundaryRegion, rule: Optional[QuadratureRule] = None,
                        tolerance: Optional[float] = None) -> int:
    """2 × 限制迹张成空间的维数，截断到求积分辨率上限"""
    rule = resolve_rule(rule)
    distinct = restricted_gamma_basis(basis, region, rule, tolerance).size
    return int(min(max(1, 2 * distinct), max_gamma_size(rule)))

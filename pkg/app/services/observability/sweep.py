"""
布置扫描 - 在精确有理网格上移动模板传感器，逐位置做核检验与秩检验

模板是场景中的第一个传感器，其余传感器在每个位置保持不动。
各位置并发计算（信号量限制并发数），结果按网格顺序合并。
"""
import asyncio
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import BaseCustomException, InvalidArgumentException
from app.core.logging import get_logger
from app.models.geometry import Coordinate, DiscDomain, PlanarSupport
from app.models.report import Disagreement, SweepRow, SweepTable
from app.models.sensor import InternalPointwise, InternalZone
from app.services.boundary.gamma_basis import GammaBasis
from app.services.boundary.quadrature import QuadratureRule
from app.services.observability.corollaries import check_applicable
from app.services.observability.kernel_test import evaluate_kernel, mode_gamma_pairings
from app.services.observability.rank_test import omega_strategic_test
from app.services.sensors.output import sensor_row
from app.services.spectral.modes import ModeBasis

logger = get_logger(__name__)

SWEEPABLE_KINDS = (InternalPointwise, InternalZone)


def parse_grid(text: str) -> Tuple[int, int]:
    """解析 "<nx>x<ny>" 形式的网格规格"""
    parts = text.lower().split("x")
    try:
        nx, ny = (int(part) for part in parts)
    except ValueError:
        raise InvalidArgumentException(f"网格规格必须形如 5x5: {text!r}")
    if nx < 0 or ny < 0:
        raise InvalidArgumentException(f"网格规格必须非负: {text!r}")
    return nx, ny


def grid_points(domain, nx: int, ny: int) -> List[Tuple[Coordinate, Coordinate]]:
    """
    精确有理网格

    矩形：((k+1)/(nx+1)·a1, (l+1)/(ny+1)·a2)；圆盘：((k+1)/(nx+1)·a, 2π·l/ny)。
    按第一坐标外层、第二坐标内层的顺序排列。
    """
    if nx == 0 or ny == 0:
        return []
    points = []
    for k in range(nx):
        for l in range(ny):
            if isinstance(domain, DiscDomain):
                first = domain.radius.scaled(Fraction(k + 1, nx + 1))
                second = Coordinate.exact(Fraction(2 * l, ny), pi_multiple=True)
            else:
                first = domain.a1.scaled(Fraction(k + 1, nx + 1))
                second = domain.a2.scaled(Fraction(l + 1, ny + 1))
            points.append((first, second))
    return points


def move_template(template, point: Tuple[Coordinate, Coordinate]):
    """把模板传感器移动到网格点（区域传感器保持支撑集尺寸，中心对准网格点）"""
    if isinstance(template, InternalPointwise):
        return template.model_copy(update={"location": point})
    if isinstance(template, InternalZone):
        half = Fraction(1, 2)
        widths = [(template.support.hi[axis] - template.support.lo[axis]).scaled(half) for axis in range(2)]
        support = PlanarSupport(
            lo=(point[0] - widths[0], point[1] - widths[1]),
            hi=(point[0] + widths[0], point[1] + widths[1]),
        )
        return template.model_copy(update={"support": support})
    raise InvalidArgumentException(f"扫描模板只能是内部点传感器或内部区域传感器: {template.kind}")


@dataclass(frozen=True)
class SweepContext:
    """扫描中所有位置共享的量"""
    basis: ModeBasis
    gamma: GammaBasis
    pairings: np.ndarray
    companions: Tuple
    companion_rows: np.ndarray
    rule: Optional[QuadratureRule]
    tolerance: float
    bound: int
    max_denominator: int


def evaluate_location(context: SweepContext, template, point: Tuple[Coordinate, Coordinate]) -> SweepRow:
    """单个位置的核检验、秩检验与推论检验；该位置的错误记录在行内"""
    location = [str(coordinate.to_json()) for coordinate in point]
    x, y = float(point[0]), float(point[1])
    try:
        moved = move_template(template, point)
        sensors = (moved,) + context.companions
        row = sensor_row(moved, context.basis, context.rule)
        matrix = np.vstack([row[None, :], context.companion_rows]) if context.companion_rows.size else row[None, :]
        kernel = evaluate_kernel(matrix, context.basis, context.gamma, context.tolerance, context.pairings)
        omega = omega_strategic_test(sensors, context.basis, matrix, context.rule, context.tolerance)
        outcomes = check_applicable(context.basis.domain, sensors, context.bound, context.max_denominator)
        corollary = all(outcome.passed for outcome in outcomes) if outcomes else None
    except BaseCustomException as exc:
        logger.debug(f"扫描位置 ({x:.6g}, {y:.6g}) 失败: {exc.message}")
        return SweepRow(x=x, y=y, location=location, error=exc.message)

    return SweepRow(
        x=x,
        y=y,
        location=location,
        sigma_min=kernel.sigma_min,
        gamma_passed=kernel.passed,
        omega_passed=omega.passed,
        corollary_passed=corollary,
    )


async def placement_sweep_async(template, companions: Sequence, nx: int, ny: int, basis: ModeBasis,
                                gamma: GammaBasis, rule: Optional[QuadratureRule] = None,
                                tolerance: Optional[float] = None, bound: Optional[int] = None,
                                max_denominator: Optional[int] = None,
                                max_concurrency: Optional[int] = None) -> SweepTable:
    """并发扫描；行顺序与网格顺序一致"""
    if not isinstance(template, SWEEPABLE_KINDS):
        raise InvalidArgumentException(f"扫描模板只能是内部点传感器或内部区域传感器: {template.kind}")
    tolerance = settings.RANK_TOLERANCE if tolerance is None else tolerance
    companions = tuple(companions)
    companion_rows = (
        np.vstack([sensor_row(sensor, basis, rule) for sensor in companions])
        if companions else np.zeros((0, basis.size))
    )
    context = SweepContext(
        basis=basis,
        gamma=gamma,
        pairings=mode_gamma_pairings(basis, gamma),
        companions=companions,
        companion_rows=companion_rows,
        rule=rule,
        tolerance=tolerance,
        bound=bound or max(1, basis.cutoff[0]),
        max_denominator=max_denominator or settings.RATIONAL_MAX_DENOMINATOR,
    )

    points = grid_points(basis.domain, nx, ny)
    semaphore = asyncio.Semaphore(max_concurrency or settings.SWEEP_MAX_CONCURRENCY)

    async def run_one(point):
        async with semaphore:
            return await asyncio.to_thread(evaluate_location, context, template, point)

    logger.info(f"开始布置扫描: 模板={template.name}, 网格={nx}x{ny}, 位置数={len(points)}")
    rows = await asyncio.gather(*(run_one(point) for point in points))

    disagreements = [
        Disagreement(rule="applicable", corollary_passed=row.corollary_passed, kernel_passed=row.gamma_passed,
                     location=[row.x, row.y])
        for row in rows
        if row.corollary_passed is not None and row.gamma_passed is not None and row.corollary_passed != row.gamma_passed
    ]
    if disagreements:
        logger.warning(f"扫描中有 {len(disagreements)} 个位置的推论判定与核检验不一致")
    logger.info(f"布置扫描完成: {len(rows)} 个位置, 失败位置 {sum(1 for row in rows if row.error)} 个")
    return SweepTable(template=template.name, nx=nx, ny=ny, rows=list(rows), disagreements=disagreements)


def placement_sweep(template, companions: Sequence, nx: int, ny: int, basis: ModeBasis, gamma: GammaBasis,
                    rule: Optional[QuadratureRule] = None, tolerance: Optional[float] = None,
                    bound: Optional[int] = None, max_denominator: Optional[int] = None,
                    max_concurrency: Optional[int] = None) -> SweepTable:
    """
    布置扫描（同步入口）

    Args:
        template: 被移动的传感器
        companions: 固定不动的其余传感器
        nx, ny: 网格规模
        basis: 截断基
        gamma: Γ上的试探基
        bound: 推论检验的模态上界J

    Returns:
        SweepTable
    """
    return asyncio.run(
        placement_sweep_async(template, companions, nx, ny, basis, gamma, rule, tolerance, bound,
                              max_denominator, max_concurrency)
    )

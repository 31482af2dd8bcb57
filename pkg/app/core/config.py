"""
应用配置管理

所有数值默认值（截断、容差、求积、时间窗）集中在此处，场景文件中省略的字段
由这里的取值补全，报告会回显补全后的结果。
"""
import os
from typing import List, Optional
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """应用配置类（环境变量或 .env 文件可覆盖默认值）"""

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    # ======================
    # 应用基础配置
    # ======================
    APP_NAME: str = Field(default="regional-boundary-sensors", description="应用名称")
    APP_VERSION: str = Field(default="1.0.0", description="应用版本")
    DEBUG: bool = Field(default=False, description="调试模式")

    # ======================
    # 数值容差配置
    # ======================
    RANK_TOLERANCE: float = Field(default=1e-8, description="数值秩阈值（相对于最大奇异值）")
    GROUP_TOLERANCE: float = Field(default=1e-9, description="特征值分组相对容差")

    # ======================
    # 求积配置
    # ======================
    QUADRATURE_NODES_PER_PANEL: int = Field(default=32, description="每个面板的Gauss-Legendre节点数")
    QUADRATURE_PANELS_PER_SEGMENT: int = Field(default=4, description="每段的面板数")

    # ======================
    # 截断配置
    # ======================
    RECTANGLE_CUTOFF: int = Field(default=8, description="矩形区域每个方向的最大模态指标")
    DISC_ANGULAR_CUTOFF: int = Field(default=6, description="圆盘区域的最大角向阶数")
    DISC_RADIAL_CUTOFF: int = Field(default=6, description="圆盘区域的最大径向阶数")
    DISC_RADIAL_FAMILY: str = Field(default="neumann", description="圆盘径向常数族：neumann 或 dirichlet")
    NORMALIZATION: str = Field(default="l2", description="特征函数归一化方式：l2 或 h1")

    # ======================
    # 重构配置
    # ======================
    TIME_WINDOW_START: float = Field(default=0.0, description="采样时间窗起点")
    TIME_WINDOW_END: float = Field(default=0.05, description="采样时间窗终点")
    SAMPLES_PER_MODE: int = Field(default=4, description="每个模态对应的采样点数")

    # ======================
    # 推论检验与扫描配置
    # ======================
    RATIONAL_MAX_DENOMINATOR: int = Field(default=1_000_000, description="浮点坐标有理逼近的最大分母")
    SWEEP_MAX_CONCURRENCY: int = Field(default=4, description="布置扫描的最大并发数")

    # ======================
    # 日志配置
    # ======================
    LOG_LEVEL: str = Field(default="INFO", description="日志级别")
    LOG_FILE: Optional[str] = Field(default=None, description="日志文件路径（为空则只输出到stderr）")
    LOG_MAX_SIZE: str = Field(default="10MB", description="日志文件最大大小")
    LOG_BACKUP_COUNT: int = Field(default=5, description="日志文件备份数量")

    @field_validator("DISC_RADIAL_FAMILY")
    @classmethod
    def _check_radial_family(cls, value: str) -> str:
        if value not in ("neumann", "dirichlet"):
            raise ValueError("DISC_RADIAL_FAMILY 只能是 neumann 或 dirichlet")
        return value

    @field_validator("NORMALIZATION")
    @classmethod
    def _check_normalization(cls, value: str) -> str:
        if value not in ("l2", "h1"):
            raise ValueError("NORMALIZATION 只能是 l2 或 h1")
        return value

    def default_time_samples(self, mode_count: int) -> int:
        """获取默认采样点数（每个模态 SAMPLES_PER_MODE 个）"""
        return max(1, self.SAMPLES_PER_MODE * mode_count)

    def ensure_directories(self):
        """确保日志目录存在"""
        directories: List[Optional[str]] = [
            os.path.dirname(self.LOG_FILE) if self.LOG_FILE else None,
        ]

        for directory in directories:
            if directory and not os.path.exists(directory):
                os.makedirs(directory, exist_ok=True)


# 创建全局配置实例
settings = Settings()

# 确保必要的目录存在
settings.ensure_directories()

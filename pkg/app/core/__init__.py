"""
核心模块 - 配置、日志、异常等基础设施
"""

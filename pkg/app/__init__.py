"""
区域边界策略传感器分析工具 - 应用包

热方程（Neumann边界）在矩形与圆盘上的区域边界可观性判定、观测常数估计与边界迹重构。
"""

"""MOBBO-OCD: 属性网络重叠社区检测（多目标生物地理学优化）"""

__version__ = "1.0.0"

"""
异常定义
社区检测流程中所有模块共用的异常层次结构

- InputError: 由用户输入（网络文件、划分文件、运行配置）引起的错误，命令行返回码 3
- 其余 MobboError: 运行期/前置条件错误，命令行返回码 4
"""

from typing import Optional


class MobboError(Exception):
    """所有自定义异常的基类"""


class InputError(MobboError, ValueError):
    """输入数据错误"""


class MalformedLine(InputError):
    """输入文件中存在格式错误的行"""

    def __init__(self, message: str, line_no: Optional[int] = None, line: Optional[str] = None):
        self.line_no = line_no
        self.line = line
        if line_no is not None:
            message = f"第 {line_no} 行: {message}"
            if line is not None:
                message = f"{message} ({line!r})"
        super().__init__(message)


class EmptyNetwork(MalformedLine):
    """边文件中没有任何边"""


class SelfLoop(InputError):
    """边文件中出现自环"""


class UnknownNodeInAttributes(InputError):
    """属性文件引用了边文件中未声明的节点"""


class MissingAttributeRow(InputError):
    """某个节点缺少属性行"""


class IsolatedNode(InputError):
    """存在度为 0 的节点且未允许丢弃"""


class PartitionNodeMismatch(InputError):
    """划分文件引用了网络中不存在的节点"""


class EmptyAfterSingletonDrop(InputError):
    """去除单节点社区后划分为空"""


class ConfigInvalid(InputError):
    """运行配置非法"""


class OutOfRangeNode(MobboError, IndexError):
    """节点编号越界"""


class OverlappingSets(MobboError):
    """两个子图节点集合存在交集"""


class EmptyPartition(MobboError):
    """划分中没有任何社区"""


class OverlapPresent(MobboError):
    """要求不重叠划分时出现了重叠节点"""


class NoAttributes(MobboError):
    """网络没有节点属性"""


class DegenerateDenominator(MobboError):
    """α_SAEM 分母为 0，无法评分"""


class UnevaluatedHabitat(MobboError):
    """栖息地尚未计算 HSI"""


class InsufficientPopulation(MobboError):
    """合并种群数量不足以选出下一代"""


class PopulationTooSmall(MobboError):
    """种群规模小于 2"""


class EmptyFront(MobboError):
    """结果中没有可选的非支配解"""

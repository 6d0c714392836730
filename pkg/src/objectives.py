"""
目标函数
扩展模块度（EQ）、属性相似度（SimAtt）、原始模块度 Q 与折中评分 α_SAEM

所有函数均为纯函数；单节点社区在指标计算前被去除。
"""

import logging
from dataclasses import dataclass

import numpy as np

from src.errors import (
    DegenerateDenominator,
    EmptyAfterSingletonDrop,
    EmptyPartition,
    NoAttributes,
    OverlapPresent,
)
from src.graph import AttributedNetwork
from src.olar import Habitat, OverlappingPartition, decode

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ObjectiveVector:
    """一个栖息地的 HSI：(扩展模块度, 属性相似度)，两者均为最大化目标"""

    eq: float
    simatt: float

    def as_tuple(self):
        return (self.eq, self.simatt)


def _weighted_membership(partition: OverlappingPartition) -> np.ndarray:
    """隶属矩阵按 1/O_v 加权；不属于任何社区的节点整行为 0"""
    matrix = partition.membership_matrix()
    counts = partition.overlap_counts.astype(np.float64)
    scale = np.divide(1.0, counts, out=np.zeros_like(counts), where=counts > 0)
    return matrix * scale[:, None]


def extended_modularity(net: AttributedNetwork, partition: OverlappingPartition) -> float:
    """扩展模块度

    EQ = (1/2m) Σ_c Σ_{v,w∈C_c} [A_vw - k_v k_w / 2m] / (O_v O_w)，对有序节点对（含 v=w）求和。
    """
    if partition.community_count == 0:
        raise EmptyPartition("划分中没有社区，无法计算扩展模块度")
    two_m = 2.0 * net.edge_count
    weights = _weighted_membership(partition)
    internal = float(np.sum(weights * (net.adjacency_matrix @ weights)))
    degree_sums = net.degrees.astype(np.float64) @ weights
    expected = float(np.sum(degree_sums**2)) / two_m
    return (internal - expected) / two_m


def modularity(net: AttributedNetwork, partition: OverlappingPartition) -> float:
    """Newman-Girvan 模块度 Q（仅适用于不重叠划分）"""
    if not partition.is_disjoint:
        raise OverlapPresent("模块度 Q 只接受不重叠划分")
    m = float(net.edge_count)
    membership = partition.membership_matrix()
    inner_edges = 0.5 * np.sum(membership * (net.adjacency_matrix @ membership), axis=0)
    degree_sums = net.degrees.astype(np.float64) @ membership
    return float(np.sum(inner_edges / m - (degree_sums / (2.0 * m)) ** 2))


def sim_att(net: AttributedNetwork, partition: OverlappingPartition) -> float:
    """社区属性相似度

    对每个社区、每个属性取出现次数最多的取值计数，求和后除以 (属性数 × 社区规模)，再对社区取平均。
    重叠节点在其所属的每个社区中都完整计数。
    """
    if net.attribute_count == 0:
        raise NoAttributes("网络没有节点属性，无法计算 SimAtt")
    counted = partition.drop_singletons()
    if counted.community_count == 0:
        raise EmptyPartition("去除单节点社区后没有可计算的社区")

    membership = counted.membership_matrix()
    sizes = membership.sum(axis=0)
    best = np.zeros(counted.community_count, dtype=np.float64)
    for onehot in net.attribute_onehot:
        best += (membership.T @ onehot).max(axis=1)
    return float(np.mean(best / (net.attribute_count * sizes)))


def alpha_saem(simatt: float, eq: float, alpha: float) -> float:
    """α_SAEM 折中评分: (1+α²)·SimAtt·EQ / (α²·SimAtt + EQ)

    α=1 时为二者的调和平均；α→0 趋近 SimAtt，α→∞ 趋近 EQ。EQ 为负时按原式计算。
    """
    if alpha < 0:
        raise ValueError(f"α 不能为负: {alpha}")
    a2 = alpha * alpha
    denominator = a2 * simatt + eq
    if denominator == 0:
        raise DegenerateDenominator(f"α_SAEM 分母为 0 (SimAtt={simatt}, EQ={eq}, α={alpha})")
    return (1.0 + a2) * simatt * eq / denominator


def evaluate_hsi(net: AttributedNetwork, habitat: Habitat) -> ObjectiveVector:
    """计算并缓存栖息地的 HSI（未解码时先解码）"""
    if habitat.hsi is not None:
        return habitat.hsi
    if habitat.partition is None:
        decode(net, habitat)
    habitat.hsi = ObjectiveVector(
        eq=extended_modularity(net, habitat.partition),
        simatt=sim_att(net, habitat.partition),
    )
    return habitat.hsi


def evaluate_partition(net: AttributedNetwork, partition: OverlappingPartition) -> ObjectiveVector:
    """评估任意（外部导入的）划分，先去除单节点社区"""
    counted = partition.drop_singletons()
    if counted.community_count == 0:
        raise EmptyAfterSingletonDrop("去除单节点社区后划分为空")
    dropped = partition.community_count - counted.community_count
    if dropped:
        logger.info(f"忽略 {dropped} 个单节点社区")
    return ObjectiveVector(eq=extended_modularity(net, counted), simatt=sim_att(net, counted))

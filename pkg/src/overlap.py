"""
候选重叠节点识别
基于关键邻居子图与链接紧密度（LC）找出 OVSet

对每个节点 i：在其邻居池中依次提取两个关键邻居子图（第二次提取前从池中移除第一个子图成员），
若两个子图都存在且二者之间的 LC 不超过阈值，则 i 为候选重叠节点。
"""

import logging
import math
from dataclasses import dataclass
from typing import AbstractSet, FrozenSet, Optional

import numpy as np

from src.errors import ConfigInvalid, OverlappingSets
from src.graph import AttributedNetwork, neighbors
from src.logger_instance import log

logger = logging.getLogger(__name__)

DEFAULT_LC_THRESHOLD = 0.1

# 候选重叠节点集合
OVSet = FrozenSet[int]


@dataclass(frozen=True)
class KeyNeighboringSubgraph:
    """关键邻居子图：关键邻居节点及其与锚点的共同邻居"""

    key_node: int
    members: FrozenSet[int]


def key_neighboring_node(
    net: AttributedNetwork, i: int, available: AbstractSet[int], rng: np.random.Generator
) -> Optional[int]:
    """在 available 中找与节点 i 共同邻居最多的节点

    共同邻居只在 available 内计数（即在移除已提取子图后的剩余图上计算）。
    多个候选并列时用 rng 均匀选择一个；available 为空时返回 None。
    """
    if not available:
        return None
    candidates = sorted(available)
    counts = [sum(1 for w in neighbors(net, c) if w in available) for c in candidates]
    best = max(counts)
    tied = [c for c, count in zip(candidates, counts) if count == best]
    if len(tied) == 1:
        return tied[0]
    return tied[int(rng.integers(len(tied)))]


def key_neighboring_subgraph(
    net: AttributedNetwork, i: int, available: AbstractSet[int], rng: np.random.Generator
) -> Optional[KeyNeighboringSubgraph]:
    """提取节点 i 在 available 上的关键邻居子图"""
    key_node = key_neighboring_node(net, i, available, rng)
    if key_node is None:
        return None
    common = {w for w in neighbors(net, key_node) if w in available}
    return KeyNeighboringSubgraph(key_node=key_node, members=frozenset(common | {key_node}))


def _links(net: AttributedNetwork, s1: AbstractSet[int], s2: AbstractSet[int]) -> int:
    """s1 与 s2 之间的边数（s1 == s2 时为内部边数，每条边计一次）"""
    if s1 is s2 or s1 == s2:
        return sum(1 for u in s1 for v in neighbors(net, u) if v in s1 and u < v)
    return sum(1 for u in s1 for v in neighbors(net, u) if v in s2)


def _ratio(cross: int, inner: int) -> float:
    if inner == 0:
        return 0.0 if cross == 0 else math.inf
    return cross / inner


def link_closeness(net: AttributedNetwork, s1: AbstractSet[int], s2: AbstractSet[int]) -> float:
    """两个不相交节点集合之间的链接紧密度

    LC = max(L(s1,s2)/L(s1,s1), L(s1,s2)/L(s2,s2))
    内部无边时：跨集合也无边记 0，否则记 +inf。
    """
    if set(s1) & set(s2):
        raise OverlappingSets("计算链接紧密度的两个子图不能有公共节点")
    cross = _links(net, s1, s2)
    return max(_ratio(cross, _links(net, s1, s1)), _ratio(cross, _links(net, s2, s2)))


def find_ovset(
    net: AttributedNetwork,
    lc_threshold: float = DEFAULT_LC_THRESHOLD,
    rng: Optional[np.random.Generator] = None,
) -> OVSet:
    """识别全部候选重叠节点

    Args:
        net: 属性网络
        lc_threshold: 稀疏判定阈值（LC <= 阈值视为稀疏）
        rng: 并列关键邻居的随机选择来源

    Returns:
        候选重叠节点的内部编号集合
    """
    if lc_threshold < 0:
        raise ConfigInvalid(f"LC 阈值不能为负: {lc_threshold}")
    if rng is None:
        rng = np.random.default_rng()

    members = set()
    for i in range(net.node_count):
        pool = set(neighbors(net, i))
        first = key_neighboring_subgraph(net, i, pool, rng)
        pool -= first.members
        if not pool:
            continue
        second = key_neighboring_subgraph(net, i, pool, rng)
        if link_closeness(net, first.members, second.members) <= lc_threshold:
            members.add(i)

    log.d_print(f"候选重叠节点: {len(members)} 个 (阈值 {lc_threshold})")
    return frozenset(members)

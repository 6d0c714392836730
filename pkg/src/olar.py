"""
重叠的基于位点邻接表示（OLAR）
栖息地的编码、标记、第一次解码与最终解码

- 编码: siv[i] 为节点 i 的一个邻居，表示边 (i, siv[i])
- 标记: 候选重叠节点的状态随机取 0/1，其余节点为 0
- 第一次解码: 边集 {(i, siv[i])} 的连通分量即不重叠社区，标签 1..N_cm 按最小成员编号排序
- 最终解码: 状态为 1 的节点属于其全部邻居所在的社区
"""

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, AbstractSet, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from src.graph import AttributedNetwork

if TYPE_CHECKING:
    from src.objectives import ObjectiveVector

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class OverlappingPartition:
    """重叠划分

    communities[c] 为第 c 个社区（0 起始）的节点集合；
    memberships[v] 为节点 v 所属社区下标集合；overlap_counts[v] = |memberships[v]|。
    """

    communities: Tuple[FrozenSet[int], ...]
    memberships: Tuple[FrozenSet[int], ...]
    overlap_counts: np.ndarray

    @classmethod
    def from_communities(
        cls, communities: Iterable[Iterable[int]], node_count: int
    ) -> "OverlappingPartition":
        """由社区节点集合构造划分（允许部分节点不属于任何社区）"""
        frozen = tuple(frozenset(int(v) for v in community) for community in communities)
        memberships: List[set] = [set() for _ in range(node_count)]
        for c, community in enumerate(frozen):
            for v in community:
                if not 0 <= v < node_count:
                    raise ValueError(f"社区 {c} 含越界节点 {v}")
                memberships[v].add(c)
        overlap_counts = np.array([len(m) for m in memberships], dtype=np.int64)
        return cls(
            communities=frozen,
            memberships=tuple(frozenset(m) for m in memberships),
            overlap_counts=overlap_counts,
        )

    @property
    def node_count(self) -> int:
        return len(self.memberships)

    @property
    def community_count(self) -> int:
        return len(self.communities)

    @property
    def is_disjoint(self) -> bool:
        return bool(np.all(self.overlap_counts <= 1))

    @property
    def covers_all_nodes(self) -> bool:
        return bool(np.all(self.overlap_counts >= 1))

    def membership_matrix(self) -> np.ndarray:
        """(node_count, community_count) 的 0/1 隶属矩阵"""
        matrix = np.zeros((self.node_count, self.community_count), dtype=np.float64)
        for c, community in enumerate(self.communities):
            matrix[list(community), c] = 1.0
        return matrix

    def drop_singletons(self) -> "OverlappingPartition":
        """去除单节点社区（孤立社区不参与指标计算）"""
        kept = [community for community in self.communities if len(community) > 1]
        if len(kept) == len(self.communities):
            return self
        return OverlappingPartition.from_communities(kept, self.node_count)

    def canonical_key(self) -> Tuple[Tuple[int, ...], ...]:
        """与社区顺序无关的划分标识，用于去重"""
        return tuple(sorted(tuple(sorted(community)) for community in self.communities))


@dataclass(eq=False)
class Habitat:
    """一个候选解（栖息地）"""

    siv: np.ndarray
    status: np.ndarray
    community: Optional[np.ndarray] = None
    final_community: Optional[Tuple[FrozenSet[int], ...]] = None
    partition: Optional[OverlappingPartition] = None
    hsi: Optional["ObjectiveVector"] = None
    rank: Optional[int] = None
    crowding: Optional[float] = field(default=None)

    def copy(self) -> "Habitat":
        """复制基因型（siv/status 为独立数组），解码结果与 HSI 共享引用"""
        return Habitat(
            siv=self.siv.copy(),
            status=self.status.copy(),
            community=self.community,
            final_community=self.final_community,
            partition=self.partition,
            hsi=self.hsi,
            rank=self.rank,
            crowding=self.crowding,
        )

    @property
    def genotype_key(self) -> bytes:
        return self.siv.tobytes() + self.status.tobytes()

    def adopt_decoding(self, other: "Habitat") -> "Habitat":
        """沿用基因型相同的栖息地的解码结果与 HSI"""
        self.community = other.community
        self.final_community = other.final_community
        self.partition = other.partition
        self.hsi = other.hsi
        return self


def first_decode(siv: np.ndarray, n_siv: Optional[int] = None) -> np.ndarray:
    """第一次解码：返回每个节点的不重叠社区标签（1..N_cm）"""
    n = len(siv) if n_siv is None else n_siv
    # 每行恰好一个非零元 (i, siv[i])，直接给出 CSR 三元组
    graph = sparse.csr_matrix(
        (np.ones(n), np.asarray(siv, dtype=np.int32), np.arange(n + 1, dtype=np.int32)),
        shape=(n, n),
    )
    _, raw = connected_components(graph, directed=True, connection="weak")
    _, first_index = np.unique(raw, return_index=True)
    order = np.argsort(first_index)
    relabel = np.empty(len(order), dtype=np.int64)
    relabel[order] = np.arange(1, len(order) + 1)
    return relabel[raw]


def final_decode(
    net: AttributedNetwork, habitat: Habitat
) -> Tuple[Tuple[FrozenSet[int], ...], OverlappingPartition]:
    """最终解码：返回 (每个节点的社区标签集合, 重叠划分)

    划分中社区下标 c 对应标签 c + 1。
    """
    community = habitat.community
    final: List[FrozenSet[int]] = []
    for i in range(net.node_count):
        if habitat.status[i]:
            final.append(frozenset(int(community[j]) for j in net.adjacency[i]))
        else:
            final.append(frozenset((int(community[i]),)))

    members: List[List[int]] = [[] for _ in range(int(community.max()))]
    for i, labels in enumerate(final):
        for label in labels:
            members[label - 1].append(i)
    partition = OverlappingPartition(
        communities=tuple(frozenset(m) for m in members),
        memberships=tuple(frozenset(label - 1 for label in labels) for labels in final),
        overlap_counts=np.fromiter((len(labels) for labels in final), dtype=np.int64),
    )
    return tuple(final), partition


def decode(net: AttributedNetwork, habitat: Habitat) -> Habitat:
    """重新执行两个解码阶段，并清空过期的 HSI"""
    habitat.community = first_decode(habitat.siv, net.node_count)
    habitat.final_community, habitat.partition = final_decode(net, habitat)
    habitat.hsi = None
    return habitat


def encode_random(
    net: AttributedNetwork, ovset: AbstractSet[int], rng: np.random.Generator
) -> Habitat:
    """随机生成一个栖息地（编码 + 标记）并完成解码"""
    n = net.node_count
    siv = np.empty(n, dtype=np.int64)
    status = np.zeros(n, dtype=np.int8)
    for j in range(n):
        row = net.adjacency[j]
        siv[j] = row[int(rng.integers(len(row)))]
        if j in ovset:
            status[j] = int(rng.integers(2))
    return decode(net, Habitat(siv=siv, status=status))


def habitat_violations(
    net: AttributedNetwork, habitat: Habitat, ovset: Optional[AbstractSet[int]] = None
) -> List[str]:
    """列出栖息地违反的不变量（为空表示合法）"""
    problems = []
    for i in range(net.node_count):
        if int(habitat.siv[i]) not in net.adjacency[i]:
            problems.append(f"siv[{i}]={int(habitat.siv[i])} 不是节点 {i} 的邻居")
        if habitat.status[i] not in (0, 1):
            problems.append(f"status[{i}]={habitat.status[i]} 不是 0/1")
        elif habitat.status[i] == 1 and ovset is not None and i not in ovset:
            problems.append(f"节点 {i} 不在 OVSet 中但状态为 1")
    return problems


def make_habitat(
    net: AttributedNetwork,
    siv: Sequence[int],
    status: Optional[Sequence[int]] = None,
    ovset: Optional[AbstractSet[int]] = None,
) -> Habitat:
    """由给定的 siv/status 构造并解码栖息地（非法输入抛出 ValueError）"""
    if len(siv) != net.node_count:
        raise ValueError(f"siv 长度 {len(siv)} 与节点数 {net.node_count} 不一致")
    if status is None:
        status = [0] * net.node_count
    if len(status) != net.node_count:
        raise ValueError(f"status 长度 {len(status)} 与节点数 {net.node_count} 不一致")
    habitat = Habitat(
        siv=np.asarray(siv, dtype=np.int64).copy(), status=np.asarray(status, dtype=np.int8).copy()
    )
    problems = habitat_violations(net, habitat, ovset)
    if problems:
        raise ValueError("; ".join(problems))
    return decode(net, habitat)

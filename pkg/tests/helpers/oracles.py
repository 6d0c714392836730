"""
测试辅助工具：暴力参照实现

与 src 中的向量化实现相互独立，只用于在小规模输入上核对结果
"""

import itertools
from collections import deque
from typing import Dict, FrozenSet, List, Sequence, Set, Tuple

from src.graph import AttributedNetwork

Point = Tuple[float, ...]


def pairwise_eq(net: AttributedNetwork, communities: Sequence[Sequence[int]]) -> float:
    """逐个有序节点对累加的扩展模块度"""
    two_m = 2.0 * net.edge_count
    overlap: Dict[int, int] = {}
    for community in communities:
        for v in set(community):
            overlap[v] = overlap.get(v, 0) + 1
    adjacency = [set(row) for row in net.adjacency]
    degree = [len(row) for row in net.adjacency]
    total = 0.0
    for community in communities:
        members = sorted(set(community))
        for v in members:
            for w in members:
                a_vw = 1.0 if w in adjacency[v] else 0.0
                term = a_vw - degree[v] * degree[w] / two_m
                total += term / (overlap[v] * overlap[w])
    return total / two_m


def bfs_labels(siv: Sequence[int]) -> List[int]:
    """边集 {(i, siv[i])} 的连通分量，标签按最小成员编号从 1 开始"""
    n = len(siv)
    graph: List[Set[int]] = [set() for _ in range(n)]
    for i, j in enumerate(siv):
        graph[i].add(int(j))
        graph[int(j)].add(i)
    labels = [0] * n
    current = 0
    for start in range(n):
        if labels[start]:
            continue
        current += 1
        labels[start] = current
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in graph[u]:
                if not labels[w]:
                    labels[w] = current
                    queue.append(w)
    return labels


def final_labels(
    net: AttributedNetwork, siv: Sequence[int], status: Sequence[int]
) -> List[FrozenSet[int]]:
    """状态为 1 的节点取全部邻居的 BFS 标签，其余节点取自身标签"""
    labels = bfs_labels(siv)
    return [
        frozenset(labels[w] for w in net.adjacency[v]) if status[v] else frozenset({labels[v]})
        for v in range(len(siv))
    ]


def point_dominates(a: Point, b: Point) -> bool:
    return all(x >= y for x, y in zip(a, b)) and any(x > y for x, y in zip(a, b))


def peeling_ranks(points: Sequence[Point]) -> List[int]:
    """反复移除非支配集合得到的等级"""
    remaining = set(range(len(points)))
    ranks = [0] * len(points)
    rank = 1
    while remaining:
        front = {
            p
            for p in remaining
            if not any(point_dominates(points[q], points[p]) for q in remaining if q != p)
        }
        for p in front:
            ranks[p] = rank
        remaining -= front
        rank += 1
    return ranks


def loop_crowding(points: Sequence[Point]) -> List[float]:
    """逐目标排序的拥挤距离（参照实现）"""
    n = len(points)
    if n <= 2:
        return [float("inf")] * n
    distance = [0.0] * n
    for m in range(len(points[0])):
        order = sorted(range(n), key=lambda i: points[i][m])
        low, high = points[order[0]][m], points[order[-1]][m]
        distance[order[0]] = distance[order[-1]] = float("inf")
        if high == low:
            continue
        for position in range(1, n - 1):
            gap = points[order[position + 1]][m] - points[order[position - 1]][m]
            distance[order[position]] += gap / (high - low)
    return distance


def nsga_truncate(points: Sequence[Point], n_keep: int) -> List[int]:
    """按 (等级, 拥挤距离) 截断，返回保留的下标"""
    ranks = peeling_ranks(points)
    crowding = [0.0] * len(points)
    for rank in set(ranks):
        members = [i for i in range(len(points)) if ranks[i] == rank]
        for i, d in zip(members, loop_crowding([points[i] for i in members])):
            crowding[i] = d
    order = sorted(range(len(points)), key=lambda i: (ranks[i], -crowding[i]))
    return order[:n_keep]


def enumerate_genotypes(net: AttributedNetwork, ovset: Sequence[int]):
    """枚举全部 (siv, status) 组合"""
    ov = sorted(ovset)
    for siv in itertools.product(*net.adjacency):
        for bits in itertools.product((0, 1), repeat=len(ov)):
            status = [0] * net.node_count
            for v, bit in zip(ov, bits):
                status[v] = bit
            yield list(siv), status


def pareto_points(points: Sequence[Point], digits: int = 12) -> Set[Point]:
    """非支配点集合（按给定位数取整后去重）"""
    rounded = {tuple(round(x, digits) for x in p) for p in points}
    return {p for p in rounded if not any(point_dominates(q, p) for q in rounded)}

"""
进化算子
迁移率、变异概率、轮盘赌选择、迁移、两阶段变异与状态双点交叉

所有算子只修改目标栖息地 target（父代快照的副本），捐赠者一律从冻结的父代快照 snapshot 中选取。
快照按排序位置索引，下标 0 为最优栖息地。
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import AbstractSet, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from src.errors import PopulationTooSmall
from src.graph import AttributedNetwork
from src.olar import Habitat

logger = logging.getLogger(__name__)

DEFAULT_MUTATION_CONSTANT = 10.0


@dataclass(frozen=True)
class RateSchedule:
    """按排序位置给出的迁入率 lam 与迁出率 mu"""

    lam: np.ndarray
    mu: np.ndarray
    _donors: Dict[int, "RouletteTable"] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __len__(self) -> int:
        return len(self.lam)

    def draw_donor(self, i: int, rng: np.random.Generator) -> Optional[int]:
        """按迁出率 mu 轮盘赌选出捐赠者（不含 i 本身）"""
        table = self._donors.get(i)
        if table is None:
            table = self._donors[i] = roulette_table(self.mu, i)
        return spin(table, rng)


def migration_rates(n_habitat: int) -> RateSchedule:
    """迁入率为 0 到 1 的等差数列，迁出率 mu = 1 - lam"""
    if n_habitat < 2:
        raise PopulationTooSmall(f"种群规模至少为 2，当前为 {n_habitat}")
    lam = np.linspace(0.0, 1.0, n_habitat)
    mu = 1.0 - lam
    lam.setflags(write=False)
    mu.setflags(write=False)
    return RateSchedule(lam=lam, mu=mu)


def p_mutation(n_siv: int, constant: float = DEFAULT_MUTATION_CONSTANT) -> float:
    """变异概率 min(1, constant / n_siv)"""
    if n_siv < 1:
        raise ValueError(f"SIV 数量至少为 1，当前为 {n_siv}")
    return min(1.0, constant / n_siv)


RouletteTable = Tuple[np.ndarray, np.ndarray]


def roulette_table(weights: Sequence[float], exclude: Optional[int] = None) -> RouletteTable:
    """只含正权重下标（去掉 exclude）的 (候选下标, 累积权重)"""
    w = np.asarray(weights, dtype=np.float64)
    allowed = w > 0
    if exclude is not None:
        allowed[exclude] = False
    candidates = np.flatnonzero(allowed)
    return candidates, np.cumsum(w[candidates])


def spin(table: RouletteTable, rng: np.random.Generator) -> Optional[int]:
    """转动轮盘；没有候选时返回 None，只有一个候选时不消耗随机数"""
    candidates, cumulative = table
    if candidates.size == 0:
        return None
    if candidates.size == 1:
        return int(candidates[0])
    position = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    # 浮点舍入只会越过末端，仍落在候选中
    return int(candidates[min(position, candidates.size - 1)])


def roulette_select(
    weights: Sequence[float], exclude: Optional[int], rng: np.random.Generator
) -> Optional[int]:
    """轮盘赌选择一个下标（排除 exclude 与权重为 0 的下标），没有候选时返回 None"""
    return spin(roulette_table(weights, exclude), rng)


def migrate(
    snapshot: Sequence[Habitat],
    target: Habitat,
    i: int,
    k: int,
    rates: RateSchedule,
    rng: np.random.Generator,
) -> bool:
    """以概率 lam[i] 从按 mu 轮盘赌选出的捐赠者复制第 k 个 SIV，返回是否发生迁移"""
    if rng.random() >= rates.lam[i]:
        return False
    j = rates.draw_donor(i, rng)
    if j is None:
        return False
    target.siv[k] = snapshot[j].siv[k]
    return True


def siv_consensus(snapshot: Sequence[Habitat]) -> np.ndarray:
    """每个 SIV 位置在快照中出现次数最多的取值（并列取最小值）"""
    matrix = np.stack([habitat.siv for habitat in snapshot])
    return np.asarray(stats.mode(matrix, axis=0, keepdims=False).mode, dtype=np.int64)


def _pick(candidates: Sequence[int], rng: np.random.Generator) -> int:
    if len(candidates) == 1:
        return int(candidates[0])
    return int(candidates[int(rng.integers(len(candidates)))])


def _majority_neighbor_move(net: AttributedNetwork, target: Habitat, k: int, rng) -> None:
    """第一种方法：指向 k 的邻居中占多数的社区里的一个邻居"""
    row = net.adjacency[k]
    labels = [int(target.community[j]) for j in row]
    counts = Counter(labels)
    top = max(counts.values())
    label = _pick(sorted(value for value, count in counts.items() if count == top), rng)
    target.siv[k] = _pick([j for j, value in zip(row, labels) if value == label], rng)


def _consensus_move(
    net: AttributedNetwork, snapshot: Sequence[Habitat], target: Habitat, k: int, pos1: int, rng
) -> None:
    """第二种方法：依次尝试种群众数 Pos1、最优栖息地取值 Pos2，否则取不同于 Pos1 的随机邻居"""
    pos2 = int(snapshot[0].siv[k])
    current = int(target.siv[k])
    if current != pos1:
        target.siv[k] = pos1
    elif current != pos2:
        target.siv[k] = pos2
    else:
        others = [j for j in net.adjacency[k] if j != pos1]
        if others:
            target.siv[k] = _pick(others, rng)


def mutate_siv(
    net: AttributedNetwork,
    snapshot: Sequence[Habitat],
    target: Habitat,
    k: int,
    rng: np.random.Generator,
    consensus: Optional[np.ndarray] = None,
) -> None:
    """SIV 变异，两种方法各以 1/2 概率选用

    第一种方法使用 target 当前的 community 标签（最近一次解码的结果）。
    """
    if rng.random() < 0.5:
        _majority_neighbor_move(net, target, k, rng)
    else:
        if consensus is None:
            consensus = siv_consensus(snapshot)
        _consensus_move(net, snapshot, target, k, int(consensus[k]), rng)


def mutate_status(habitat: Habitat, k: int, ovset: AbstractSet[int]) -> bool:
    """状态变异：候选重叠节点的状态取反，其余节点不变"""
    if k not in ovset:
        return False
    habitat.status[k] = 1 - habitat.status[k]
    return True


def crossover_status(
    snapshot: Sequence[Habitat],
    target: Habitat,
    i: int,
    rates: RateSchedule,
    rng: np.random.Generator,
) -> bool:
    """状态双点交叉

    以概率 lam[i] 选出伙伴 j，取两个不同切点 1 <= c_lo < c_hi <= n，
    新状态 = j 的 [1, c_lo] 段 + target 的 (c_lo, c_hi] 段 + j 的 (c_hi, n] 段（1 起始、闭区间）。
    """
    n = len(target.status)
    if n < 2 or rng.random() >= rates.lam[i]:
        return False
    j = rates.draw_donor(i, rng)
    if j is None:
        return False
    first = int(rng.integers(1, n + 1))
    second = int(rng.integers(1, n))
    if second >= first:
        second += 1
    lo, hi = min(first, second), max(first, second)
    status = snapshot[j].status.copy()
    status[lo:hi] = target.status[lo:hi]
    target.status = status
    return True

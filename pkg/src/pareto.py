"""
Pareto 排序
支配关系、非支配排序、拥挤距离、种群排序与环境选择（NSGA-II 方式）

两个目标均为最大化。单目标模式下支配退化为标量严格大于，拥挤距离恒为 0。
"""

import logging
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np

from src.errors import InsufficientPopulation, UnevaluatedHabitat
from src.objectives import ObjectiveVector
from src.olar import Habitat

logger = logging.getLogger(__name__)


class ObjectiveMode(Enum):
    """排序所使用的目标"""

    MULTI = "multi"
    EQ = "eq"
    SIMATT = "simatt"

    def values_of(self, hsi: ObjectiveVector) -> Tuple[float, ...]:
        if self is ObjectiveMode.EQ:
            return (hsi.eq,)
        if self is ObjectiveMode.SIMATT:
            return (hsi.simatt,)
        return (hsi.eq, hsi.simatt)


def dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    """a 支配 b：两个目标都不差且至少一个更好"""
    return a.eq >= b.eq and a.simatt >= b.simatt and (a.eq > b.eq or a.simatt > b.simatt)


def objective_matrix(
    habitats: Sequence[Habitat], mode: ObjectiveMode = ObjectiveMode.MULTI
) -> np.ndarray:
    """(种群规模, 目标数) 的目标值矩阵"""
    rows = []
    for index, habitat in enumerate(habitats):
        if habitat.hsi is None:
            raise UnevaluatedHabitat(f"第 {index} 个栖息地尚未计算 HSI")
        rows.append(mode.values_of(habitat.hsi))
    width = 2 if mode is ObjectiveMode.MULTI else 1
    return np.array(rows, dtype=np.float64).reshape(len(habitats), width)


def _ranks(values: np.ndarray) -> np.ndarray:
    """逐层剥离非支配集合，返回 1 起始的等级"""
    n = len(values)
    ge = np.all(values[:, None, :] >= values[None, :, :], axis=2)
    gt = np.any(values[:, None, :] > values[None, :, :], axis=2)
    dominance = ge & gt  # dominance[p, q]: p 支配 q
    dominated_by = dominance.sum(axis=0)
    ranks = np.zeros(n, dtype=np.int64)
    current = np.flatnonzero(dominated_by == 0)
    rank = 1
    while current.size:
        ranks[current] = rank
        dominated_by -= dominance[current].sum(axis=0)
        dominated_by[current] = -1
        current = np.flatnonzero(dominated_by == 0)
        rank += 1
    return ranks


def non_dominated_sort(
    habitats: Sequence[Habitat], mode: ObjectiveMode = ObjectiveMode.MULTI
) -> np.ndarray:
    """非支配排序，返回每个栖息地的等级（1 为最优前沿）"""
    if not habitats:
        return np.zeros(0, dtype=np.int64)
    return _ranks(objective_matrix(habitats, mode))


def _crowding(values: np.ndarray) -> np.ndarray:
    n, objective_count = values.shape
    distance = np.zeros(n, dtype=np.float64)
    if n <= 2:
        distance[:] = np.inf
        return distance
    for m in range(objective_count):
        order = np.argsort(values[:, m], kind="stable")
        column = values[order, m]
        distance[order[0]] = distance[order[-1]] = np.inf
        span = column[-1] - column[0]
        if span > 0:
            distance[order[1:-1]] += (column[2:] - column[:-2]) / span
    return distance


def crowding_distance(
    front: Sequence[Habitat], mode: ObjectiveMode = ObjectiveMode.MULTI
) -> np.ndarray:
    """同一前沿内的拥挤距离，边界点为 +inf，目标值域为 0 时该目标贡献 0"""
    if mode is not ObjectiveMode.MULTI:
        return np.zeros(len(front), dtype=np.float64)
    if not front:
        return np.zeros(0, dtype=np.float64)
    return _crowding(objective_matrix(front, mode))


def sort_population(
    habitats: Sequence[Habitat], mode: ObjectiveMode = ObjectiveMode.MULTI
) -> List[Habitat]:
    """按 (等级升序, 拥挤距离降序) 稳定排序，并写回每个栖息地的 rank 与 crowding"""
    if not habitats:
        return []
    values = objective_matrix(habitats, mode)
    ranks = _ranks(values)
    crowding = np.zeros(len(habitats), dtype=np.float64)
    if mode is ObjectiveMode.MULTI:
        for rank in np.unique(ranks):
            members = np.flatnonzero(ranks == rank)
            crowding[members] = _crowding(values[members])

    for habitat, rank, distance in zip(habitats, ranks, crowding):
        habitat.rank = int(rank)
        habitat.crowding = float(distance)
    order = sorted(range(len(habitats)), key=lambda i: (ranks[i], -crowding[i]))
    return [habitats[i] for i in order]


def select_survivors(
    merged: Sequence[Habitat], n_habitat: int, mode: ObjectiveMode = ObjectiveMode.MULTI
) -> List[Habitat]:
    """环境选择：取排序后的前 n_habitat 个栖息地"""
    if len(merged) < n_habitat:
        raise InsufficientPopulation(f"合并种群只有 {len(merged)} 个栖息地，少于 {n_habitat}")
    return sort_population(merged, mode)[:n_habitat]

"""
进化引擎
多目标生物地理学优化的完整流程：参数初始化、种群初始化、逐代演化（迁移 → 变异 → 交叉 → 解码 → 评估）、
合并排序与截断选择；以及复用全部组件、仅替换适应度的两个单目标基线。

随机数流由主种子派生（SeedSequence 的 spawn_key）:
    (0,)        初始种群
    (1,)        OVSet 识别
    (2, g, i)   第 g 代第 i 个栖息地的算子
因此并行模式与顺序模式结果逐位一致。
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import DegenerateDenominator, EmptyFront
from src.graph import AttributedNetwork
from src.logger_instance import log
from src.objectives import alpha_saem, evaluate_hsi
from src.olar import Habitat, decode, encode_random
from src.operators import (
    RateSchedule,
    crossover_status,
    migrate,
    migration_rates,
    mutate_siv,
    mutate_status,
    p_mutation,
    siv_consensus,
)
from src.overlap import OVSet, find_ovset
from src.pareto import ObjectiveMode, select_survivors, sort_population
from src.run_config import ExecutionConfig, RunConfig, RunMode

logger = logging.getLogger(__name__)

STREAM_INIT = 0
STREAM_OVSET = 1
STREAM_GENERATION = 2

# 单次运行内按基因型缓存的解码结果上限
DECODE_CACHE_LIMIT = 200_000

GenerationCallback = Callable[[int, int], None]


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """由主种子和流编号派生独立的随机数生成器"""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


@dataclass(frozen=True)
class GenerationStat:
    """一代结束时的概况"""

    generation: int
    best_eq: float
    best_simatt: float
    front_size: int


@dataclass
class RunResult:
    """一次运行的结果：排序后的最终种群及运行信息"""

    config: RunConfig
    ovset: OVSet
    population: List[Habitat]
    trace: List[GenerationStat] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def objective_mode(self) -> ObjectiveMode:
        return self.config.mode.objective_mode

    @property
    def front(self) -> List[Habitat]:
        """等级为 1 的栖息地（按排序顺序）"""
        return [habitat for habitat in self.population if habitat.rank == 1]

    @property
    def best(self) -> Habitat:
        """排序后的首个栖息地（单目标模式下即最优解）"""
        return self.population[0]

    def distinct_front(self) -> List[Habitat]:
        """按划分去重后的非支配解"""
        seen = set()
        distinct = []
        for habitat in self.front:
            key = habitat.partition.canonical_key()
            if key not in seen:
                seen.add(key)
                distinct.append(habitat)
        return distinct


def _scored(habitat: Habitat, alpha: float) -> float:
    try:
        return alpha_saem(habitat.hsi.simatt, habitat.hsi.eq, alpha)
    except DegenerateDenominator:
        return -math.inf


def best_compromise(result: RunResult, alpha: float) -> Habitat:
    """非支配解中 α_SAEM 最大者，并列时取排序靠前的"""
    front = result.front
    if not front:
        raise EmptyFront("结果中没有非支配解")
    scores = [_scored(habitat, alpha) for habitat in front]
    return front[int(np.argmax(scores))]


def _generation_stat(generation: int, population: Sequence[Habitat]) -> GenerationStat:
    front = [habitat for habitat in population if habitat.rank == 1]
    return GenerationStat(
        generation=generation,
        best_eq=max(habitat.hsi.eq for habitat in front),
        best_simatt=max(habitat.hsi.simatt for habitat in front),
        front_size=len(front),
    )


class _Evolver:
    """在冻结的父代快照上演化一个栖息地副本"""

    def __init__(
        self,
        net: AttributedNetwork,
        ovset: OVSet,
        rates: RateSchedule,
        mutation_probability: float,
        seed: int,
    ):
        self.net = net
        self.ovset = ovset
        self.rates = rates
        self.mutation_probability = mutation_probability
        self.seed = seed
        self.snapshot: Tuple[Habitat, ...] = ()
        self.consensus: Optional[np.ndarray] = None
        self.generation = 0
        self.decoded: Dict[bytes, Habitat] = {}

    def remember(self, habitat: Habitat) -> None:
        if len(self.decoded) < DECODE_CACHE_LIMIT:
            self.decoded.setdefault(habitat.genotype_key, habitat)

    def prepare(self, generation: int, snapshot: Sequence[Habitat]) -> None:
        self.generation = generation
        self.snapshot = tuple(snapshot)
        self.consensus = siv_consensus(self.snapshot)

    def __call__(self, i: int) -> Habitat:
        rng = derive_rng(self.seed, STREAM_GENERATION, self.generation, i)
        child = self.snapshot[i].copy()
        for k in range(self.net.node_count):
            migrate(self.snapshot, child, i, k, self.rates, rng)
            if rng.random() < self.mutation_probability:
                mutate_siv(self.net, self.snapshot, child, k, rng, self.consensus)
                mutate_status(child, k, self.ovset)
        crossover_status(self.snapshot, child, i, self.rates, rng)

        # 解码与评估只依赖基因型
        known = self.decoded.get(child.genotype_key)
        if known is not None:
            return child.adopt_decoding(known)
        decode(self.net, child)
        evaluate_hsi(self.net, child)
        self.remember(child)
        return child


def _evolve(
    net: AttributedNetwork,
    config: RunConfig,
    execution: ExecutionConfig,
    on_generation: Optional[GenerationCallback],
) -> RunResult:
    config.validate()
    mode = config.mode.objective_mode
    started = time.perf_counter()
    log.i_print(
        f"开始运行 {config.mode.value}: 种子 {config.seed}, 种群 {config.n_habitat}, "
        f"代数 {config.generations}, 节点 {net.node_count}"
    )

    rates = migration_rates(config.n_habitat)
    mutation_probability = p_mutation(net.node_count, config.mutation_constant)
    ovset = find_ovset(net, config.lc_threshold, derive_rng(config.seed, STREAM_OVSET))
    log.i_print(f"候选重叠节点 {len(ovset)} 个, pMutation={mutation_probability:.4f}")

    init_rng = derive_rng(config.seed, STREAM_INIT)
    population = [encode_random(net, ovset, init_rng) for _ in range(config.n_habitat)]
    for habitat in population:
        evaluate_hsi(net, habitat)
    population = sort_population(population, mode)
    trace = [_generation_stat(0, population)]

    evolver = _Evolver(net, ovset, rates, mutation_probability, config.seed)
    for habitat in population:
        evolver.remember(habitat)
    executor = ThreadPoolExecutor(max_workers=execution.workers) if execution.parallel else None
    try:
        for generation in range(1, config.generations + 1):
            evolver.prepare(generation, population)
            indices = range(config.n_habitat)
            if executor is not None:
                children = list(executor.map(evolver, indices))
            else:
                children = [evolver(i) for i in indices]

            survivors = select_survivors(list(evolver.snapshot) + children, config.n_habitat, mode)
            population = sort_population(survivors, mode)

            stat = _generation_stat(generation, population)
            trace.append(stat)
            log.d_print(
                f"第 {generation} 代: 最优 EQ={stat.best_eq:.6f}, "
                f"最优 SimAtt={stat.best_simatt:.6f}, 前沿 {stat.front_size} 个"
            )
            if on_generation is not None:
                on_generation(generation, config.generations)
    finally:
        if executor is not None:
            executor.shutdown()

    wall_time = time.perf_counter() - started
    log.i_print(f"运行结束: 耗时 {wall_time:.2f} s, 非支配解 {trace[-1].front_size} 个")
    return RunResult(
        config=config, ovset=ovset, population=population, trace=trace, wall_time=wall_time
    )


def run_mobbo_ocd(
    net: AttributedNetwork,
    config: RunConfig,
    execution: Optional[ExecutionConfig] = None,
    on_generation: Optional[GenerationCallback] = None,
) -> RunResult:
    """多目标运行：同时最大化扩展模块度与属性相似度"""
    if config.mode is not RunMode.MOBBO_OCD:
        config = replace(config, mode=RunMode.MOBBO_OCD)
    return _evolve(net, config, execution or ExecutionConfig(), on_generation)


def run_single_objective(
    net: AttributedNetwork,
    config: RunConfig,
    execution: Optional[ExecutionConfig] = None,
    on_generation: Optional[GenerationCallback] = None,
) -> RunResult:
    """单目标基线：em-bbo 只最大化 EQ，ov-simatt-bbo 只最大化 SimAtt"""
    if config.mode is RunMode.MOBBO_OCD:
        raise ValueError("单目标运行需要 em-bbo 或 ov-simatt-bbo 模式")
    return _evolve(net, config, execution or ExecutionConfig(), on_generation)


_RUNNERS: Dict[RunMode, Callable[..., RunResult]] = {
    RunMode.MOBBO_OCD: run_mobbo_ocd,
    RunMode.EM_BBO: run_single_objective,
    RunMode.OV_SIMATT_BBO: run_single_objective,
}


def run(
    net: AttributedNetwork,
    config: RunConfig,
    execution: Optional[ExecutionConfig] = None,
    on_generation: Optional[GenerationCallback] = None,
) -> RunResult:
    """按 config.mode 分派运行"""
    return _RUNNERS[config.mode](net, config, execution, on_generation)

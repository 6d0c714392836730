"""
YAML运行配置加载器和数据模型
统一管理进化参数、执行方式与运行次数，命令行参数可覆盖配置文件中的值
"""

import logging
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from src.errors import ConfigInvalid
from src.overlap import DEFAULT_LC_THRESHOLD
from src.pareto import ObjectiveMode

logger = logging.getLogger(__name__)

SEED_LIMIT = 2**64


class RunMode(Enum):
    """运行模式：多目标或两个单目标基线"""

    MOBBO_OCD = "mobbo-ocd"
    EM_BBO = "em-bbo"
    OV_SIMATT_BBO = "ov-simatt-bbo"

    @property
    def objective_mode(self) -> ObjectiveMode:
        return {
            RunMode.MOBBO_OCD: ObjectiveMode.MULTI,
            RunMode.EM_BBO: ObjectiveMode.EQ,
            RunMode.OV_SIMATT_BBO: ObjectiveMode.SIMATT,
        }[self]

    @classmethod
    def parse(cls, value: Union[str, "RunMode"]) -> "RunMode":
        if isinstance(value, RunMode):
            return value
        try:
            return cls(str(value))
        except ValueError:
            choices = ", ".join(mode.value for mode in cls)
            raise ConfigInvalid(f"未知运行模式 '{value}'，可选: {choices}") from None


@dataclass(frozen=True)
class RunConfig:
    """一次进化运行的参数"""

    n_habitat: int = 100  # 种群规模
    generations: int = 100  # 进化代数（终止条件）
    seed: int = 0  # 主随机种子
    lc_threshold: float = DEFAULT_LC_THRESHOLD  # OVSet 稀疏阈值
    mutation_constant: float = 10.0  # pMutation × nSIV
    alphas: Tuple[float, ...] = (0.5, 1.0, 1.5)  # 报告用 α 列表
    mode: RunMode = RunMode.MOBBO_OCD

    def errors(self) -> List[str]:
        """返回全部参数错误（为空表示合法）"""
        problems = []
        if self.n_habitat < 2:
            problems.append(f"n_habitat 至少为 2，当前为 {self.n_habitat}")
        if self.generations < 1:
            problems.append(f"generations 至少为 1，当前为 {self.generations}")
        if not 0 <= self.seed < SEED_LIMIT:
            problems.append(f"seed 应为 64 位非负整数，当前为 {self.seed}")
        if self.lc_threshold < 0:
            problems.append(f"lc_threshold 不能为负，当前为 {self.lc_threshold}")
        if self.mutation_constant <= 0:
            problems.append(f"mutation_constant 必须为正，当前为 {self.mutation_constant}")
        if not self.alphas:
            problems.append("alphas 不能为空")
        problems.extend(f"alpha 不能为负: {alpha}" for alpha in self.alphas if alpha < 0)
        return problems

    def validate(self) -> "RunConfig":
        problems = self.errors()
        if problems:
            raise ConfigInvalid("; ".join(problems))
        return self

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, seed=seed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_habitat": self.n_habitat,
            "generations": self.generations,
            "seed": self.seed,
            "lc_threshold": self.lc_threshold,
            "mutation_constant": self.mutation_constant,
            "alphas": list(self.alphas),
            "mode": self.mode.value,
        }


@dataclass(frozen=True)
class ExecutionConfig:
    """执行方式"""

    parallel: bool = False  # 每代内并行演化各栖息地（结果与顺序模式一致）
    workers: Optional[int] = None  # 线程数，None 表示由线程池决定


@dataclass
class ProfileMeta:
    """运行配置元数据"""

    name: str
    description: Optional[str] = None


@dataclass
class RunProfile:
    """完整的运行配置文件"""

    meta: ProfileMeta
    run: RunConfig = field(default_factory=RunConfig)
    execution: ExecutionConfig = field(default_factory=ExecutionConfig)
    runs: int = 1  # 独立运行次数，第 r 次使用 seed + r


class RunConfigLoader:
    """YAML运行配置加载器"""

    def __init__(self):
        self._cache: Dict[str, RunProfile] = {}

    def load_run_profile(self, config_path: Union[str, Path]) -> RunProfile:
        """加载运行配置"""
        config_path = Path(config_path)

        if str(config_path) in self._cache:
            return self._cache[str(config_path)]

        if not config_path.exists():
            raise FileNotFoundError(f"运行配置文件不存在: {config_path}")

        try:
            with open(config_path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}

            profile = self._parse_profile(data, default_name=config_path.stem)
            self._cache[str(config_path)] = profile

            logger.info(f"加载运行配置: {profile.meta.name}")
            return profile

        except yaml.YAMLError as e:
            logger.error(f"运行配置 {config_path} 不是合法的 YAML: {e}")
            raise ConfigInvalid(f"运行配置 {config_path} 不是合法的 YAML: {e}") from e

    def _parse_profile(self, data: Dict[str, Any], default_name: str = "") -> RunProfile:
        """解析配置数据"""
        if not isinstance(data, dict):
            raise ConfigInvalid("运行配置顶层必须是映射")

        meta_data = data.get("meta", {}) or {}
        meta = ProfileMeta(
            name=meta_data.get("name", default_name),
            description=meta_data.get("description"),
        )

        run = self._parse_run(data.get("run", {}) or {})

        execution_data = data.get("execution", {}) or {}
        unknown = set(execution_data) - {"parallel", "workers"}
        if unknown:
            raise ConfigInvalid(f"execution 中存在未知字段: {', '.join(sorted(unknown))}")
        execution = ExecutionConfig(
            parallel=bool(execution_data.get("parallel", False)),
            workers=execution_data.get("workers"),
        )

        try:
            runs = int(data.get("runs", 1))
        except (TypeError, ValueError):
            raise ConfigInvalid(f"runs 必须为整数: {data.get('runs')!r}") from None

        return RunProfile(meta=meta, run=run, execution=execution, runs=runs)

    def _parse_run(self, run_data: Dict[str, Any]) -> RunConfig:
        """解析进化参数段，未给出的字段使用默认值"""
        known = {f.name for f in fields(RunConfig)}
        unknown = set(run_data) - known
        if unknown:
            raise ConfigInvalid(f"run 中存在未知字段: {', '.join(sorted(unknown))}")

        values: Dict[str, Any] = dict(run_data)
        try:
            for name in ("n_habitat", "generations", "seed"):
                if name in values:
                    values[name] = int(values[name])
            for name in ("lc_threshold", "mutation_constant"):
                if name in values:
                    values[name] = float(values[name])
            if "alphas" in values:
                values["alphas"] = tuple(float(alpha) for alpha in values["alphas"])
        except (TypeError, ValueError) as e:
            raise ConfigInvalid(f"run 字段类型错误: {e}") from e
        if "mode" in values:
            values["mode"] = RunMode.parse(values["mode"])
        return RunConfig(**values)

    def validate_profile(self, profile: RunProfile) -> List[str]:
        """验证配置的完整性和正确性"""
        errors = []

        if not profile.meta.name:
            errors.append("配置名称不能为空")

        errors.extend(profile.run.errors())

        if profile.runs < 1:
            errors.append(f"runs 至少为 1，当前为 {profile.runs}")

        workers = profile.execution.workers
        if workers is not None and (not isinstance(workers, int) or workers < 1):
            errors.append(f"execution.workers 应为正整数，当前为 {workers!r}")

        return errors


# 全局加载器实例
run_config_loader = RunConfigLoader()

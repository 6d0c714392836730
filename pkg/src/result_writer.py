"""
结果输出
把运行结果格式化为 JSON 结果文档、TSV 汇总报告与逐代轨迹表

JSON 结果文档中只有 metadata.timing 含时间信息，其余内容对相同输入与种子逐字节一致。
"""

import json
import logging
import os
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from src import __version__
from src.engine import RunResult, best_compromise
from src.errors import DegenerateDenominator, InputError
from src.graph import AttributedNetwork
from src.logger_instance import log
from src.objectives import alpha_saem
from src.olar import Habitat

logger = logging.getLogger(__name__)

TOOL_NAME = "mobbo-ocd"


def alpha_key(alpha: float) -> str:
    """α 在文档与表头中的统一写法，如 0.5 / 1 / 1.5"""
    return f"{alpha:g}"


def _safe_alpha_saem(habitat: Habitat, alpha: float) -> Optional[float]:
    try:
        return alpha_saem(habitat.hsi.simatt, habitat.hsi.eq, alpha)
    except DegenerateDenominator:
        return None


@dataclass
class RunRecord:
    """一次运行的汇总"""

    run: int
    seed: int
    mode: str
    best_alpha_saem: Dict[str, Optional[float]]
    best_eq: float
    best_simatt: float
    wall_time: float

    @classmethod
    def from_result(cls, run: int, result: RunResult) -> "RunRecord":
        front = result.front
        return cls(
            run=run,
            seed=result.config.seed,
            mode=result.config.mode.value,
            best_alpha_saem={
                alpha_key(alpha): _safe_alpha_saem(best_compromise(result, alpha), alpha)
                for alpha in result.config.alphas
            },
            best_eq=max(habitat.hsi.eq for habitat in front),
            best_simatt=max(habitat.hsi.simatt for habitat in front),
            wall_time=result.wall_time,
        )


@dataclass
class RunReport:
    """多次独立运行的报告：逐次记录与平均值"""

    records: List[RunRecord] = field(default_factory=list)

    def add(self, record: RunRecord) -> None:
        self.records.append(record)

    @property
    def alpha_keys(self) -> List[str]:
        return list(self.records[0].best_alpha_saem) if self.records else []

    def mean_alpha_saem(self) -> Dict[str, Optional[float]]:
        """每个 α 的平均 best-of-run α_SAEM（有不可评分的运行时为 None）"""
        means: Dict[str, Optional[float]] = {}
        for key in self.alpha_keys:
            values = [record.best_alpha_saem[key] for record in self.records]
            means[key] = None if any(v is None for v in values) else sum(values) / len(values)
        return means

    def aggregate(self) -> Dict[str, Any]:
        count = len(self.records)
        return {
            "alpha_saem": self.mean_alpha_saem(),
            "best_eq": sum(r.best_eq for r in self.records) / count,
            "best_simatt": sum(r.best_simatt for r in self.records) / count,
            "wall_time": sum(r.wall_time for r in self.records) / count,
        }

    def to_tsv(self) -> str:
        header = ["run", "seed", "mode", "best_eq", "best_simatt"]
        header += [f"alpha_saem@{key}" for key in self.alpha_keys]
        header.append("wall_time")
        lines = ["\t".join(header)]

        def fmt(value: Optional[float]) -> str:
            return "NA" if value is None else repr(float(value))

        for record in self.records:
            row = [str(record.run), str(record.seed), record.mode]
            row += [fmt(record.best_eq), fmt(record.best_simatt)]
            row += [fmt(record.best_alpha_saem[key]) for key in self.alpha_keys]
            row.append(f"{record.wall_time:.3f}")
            lines.append("\t".join(row))

        if self.records:
            aggregate = self.aggregate()
            row = ["mean", "", self.records[0].mode]
            row += [fmt(aggregate["best_eq"]), fmt(aggregate["best_simatt"])]
            row += [fmt(aggregate["alpha_saem"][key]) for key in self.alpha_keys]
            row.append(f"{aggregate['wall_time']:.3f}")
            lines.append("\t".join(row))
        return "\n".join(lines) + "\n"


class ResultWriter:
    """结果格式化器

    负责把一组运行结果转换为结果文档并写入文件
    """

    def __init__(self, net: AttributedNetwork):
        """初始化结果格式化器

        Args:
            net: 运行所用的网络，用于把内部编号换回外部编号
        """
        self.net = net

    def external_ids(self, nodes) -> List[str]:
        return [self.net.node_ids[v] for v in sorted(nodes)]

    def solution_entry(self, habitat: Habitat, alphas: Sequence[float]) -> Dict[str, Any]:
        """一个解: 外部编号表示的社区列表及各项指标"""
        return {
            "communities": [self.external_ids(c) for c in habitat.partition.communities],
            "eq": habitat.hsi.eq,
            "simatt": habitat.hsi.simatt,
            "alpha_saem": {alpha_key(a): _safe_alpha_saem(habitat, a) for a in alphas},
        }

    def run_entry(self, run: int, result: RunResult, include_trace: bool = False) -> Dict[str, Any]:
        alphas = result.config.alphas
        solutions = result.distinct_front()
        keys = [habitat.partition.canonical_key() for habitat in solutions]
        chosen = {}
        for alpha in alphas:
            key = best_compromise(result, alpha).partition.canonical_key()
            chosen[alpha_key(alpha)] = keys.index(key)

        entry: Dict[str, Any] = {
            "run": run,
            "seed": result.config.seed,
            "ovset": self.external_ids(result.ovset),
            "solutions": [self.solution_entry(habitat, alphas) for habitat in solutions],
            "best_compromise": chosen,
        }
        if include_trace:
            entry["trace"] = [
                {
                    "generation": stat.generation,
                    "best_eq": stat.best_eq,
                    "best_simatt": stat.best_simatt,
                    "front_size": stat.front_size,
                }
                for stat in result.trace
            ]
        return entry

    def build_document(
        self, results: Sequence[RunResult], include_trace: bool = False
    ) -> Dict[str, Any]:
        """构建结果文档"""
        config = results[0].config.to_dict()
        return {
            "metadata": {
                "tool": TOOL_NAME,
                "version": __version__,
                "mode": results[0].config.mode.value,
                "config": config,
                "network": {
                    "nodes": self.net.node_count,
                    "edges": self.net.edge_count,
                    "attributes": list(self.net.attribute_names),
                },
                "runs": len(results),
                "timing": {
                    "generated_at": datetime.now().isoformat(timespec="seconds"),
                    "wall_times": [result.wall_time for result in results],
                },
            },
            "runs": [
                self.run_entry(index, result, include_trace) for index, result in enumerate(results)
            ],
        }

    def build_report(self, results: Sequence[RunResult]) -> RunReport:
        report = RunReport()
        for index, result in enumerate(results):
            report.add(RunRecord.from_result(index, result))
        return report

    @staticmethod
    def trace_tsv(results: Sequence[RunResult]) -> str:
        lines = ["run\tgeneration\tbest_eq\tbest_simatt\tfront_size"]
        for index, result in enumerate(results):
            for stat in result.trace:
                lines.append(
                    f"{index}\t{stat.generation}\t{stat.best_eq!r}\t{stat.best_simatt!r}\t"
                    f"{stat.front_size}"
                )
        return "\n".join(lines) + "\n"

    def save(
        self,
        results: Sequence[RunResult],
        output_path: Union[str, Path],
        include_trace: bool = False,
    ) -> Dict[str, str]:
        """写出结果文档、汇总报告（及轨迹表）

        Args:
            results: 各次运行结果
            output_path: 结果文档路径，报告与轨迹表写在同目录下
            include_trace: 是否输出逐代轨迹

        Returns:
            各输出文件的绝对路径
        """
        output_path = Path(output_path)
        if output_path.parent and not output_path.parent.exists():
            os.makedirs(output_path.parent, exist_ok=True)

        document = self.build_document(results, include_trace)
        paths = {"result": output_path, "report": output_path.with_suffix(".tsv")}
        if include_trace:
            paths["trace"] = output_path.with_name(f"{output_path.stem}.trace.tsv")

        with open(paths["result"], "w", encoding="utf-8") as f:
            f.write(dump_document(document))
        with open(paths["report"], "w", encoding="utf-8") as f:
            f.write(self.build_report(results).to_tsv())
        if include_trace:
            with open(paths["trace"], "w", encoding="utf-8") as f:
                f.write(self.trace_tsv(results))

        log.i_print(f"结果已写入 {paths['result']}")
        return {name: os.path.abspath(path) for name, path in paths.items()}


def dump_document(document: Dict[str, Any]) -> str:
    return json.dumps(document, ensure_ascii=False, indent=2) + "\n"


def strip_timing(document: Dict[str, Any]) -> Dict[str, Any]:
    """去掉 metadata.timing，用于比较两次运行的确定性输出"""
    stripped = json.loads(json.dumps(document))
    stripped.get("metadata", {}).pop("timing", None)
    return stripped


def load_solution(path: Union[str, Path], run: int = 0, solution: int = 0) -> List[List[str]]:
    """从结果文档中取出一个解的社区（外部编号）"""
    with open(path, "r", encoding="utf-8") as f:
        try:
            document = json.load(f)
        except json.JSONDecodeError as e:
            raise InputError(f"结果文档 {path} 不是合法的 JSON: {e}") from e
    try:
        communities = document["runs"][run]["solutions"][solution]["communities"]
        return [[str(node_id) for node_id in community] for community in communities]
    except (KeyError, IndexError, TypeError) as e:
        raise InputError(f"结果文档 {path} 中不存在第 {run} 次运行的第 {solution} 个解") from e

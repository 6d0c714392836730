"""
命令行入口
子命令:
    detect    运行社区检测（可多次独立运行），输出 JSON 结果文档与 TSV 报告
    evaluate  对给定划分（划分文件或结果文档中的解）计算 EQ / SimAtt / α_SAEM
    ovset     输出候选重叠节点
    list      列出内置数据集
    validate  验证运行配置

返回码: 0 成功, 2 用法错误, 3 输入错误, 4 运行错误
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from src import __version__
from src.engine import STREAM_OVSET, derive_rng, run
from src.errors import ConfigInvalid, InputError, MobboError, PartitionNodeMismatch
from src.graph import AttributedNetwork, load_gml, load_network_files
from src.logger_instance import log
from src.m_print import progress_bar
from src.objectives import alpha_saem, evaluate_partition
from src.olar import OverlappingPartition
from src.overlap import DEFAULT_LC_THRESHOLD, find_ovset
from src.result_writer import ResultWriter, alpha_key, load_solution
from src.run_config import ExecutionConfig, ProfileMeta, RunMode, RunProfile, run_config_loader
from src.validate_configs import CONFIGS_DIR, ConfigValidator, validate_all_configs

DATASETS_DIR = Path(__file__).parent.parent / "datasets"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_RUNTIME = 4


def _say(message: str) -> None:
    """终端输出并记入日志文件"""
    print(message)
    log.printf(message)


def parse_alphas(text: str) -> List[float]:
    """解析逗号分隔的 α 列表"""
    try:
        alphas = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"无法解析 α 列表: {text!r}") from None
    if not alphas or any(alpha < 0 for alpha in alphas):
        raise argparse.ArgumentTypeError(f"α 列表必须非空且不含负数: {text!r}")
    return alphas


def non_negative_int(text: str) -> int:
    """argparse 类型：非负整数"""
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"不是整数: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"不能为负: {value}")
    return value


def non_negative_float(text: str) -> float:
    """argparse 类型：非负实数"""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"不是数值: {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"必须为非负数: {text}")
    return value


def parse_partition(text: str, net: AttributedNetwork) -> OverlappingPartition:
    """解析划分文件：每行一个社区，外部节点编号以空白分隔，节点可出现在多行表示重叠

    每个网络节点都必须至少出现一次（单节点社区也算出现）。
    """
    communities = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        communities.append(_resolve_ids(line.split(), net, f"第 {line_no} 行"))
    return _covering_partition(communities, net)


def _covering_partition(
    communities: Sequence[Sequence[int]], net: AttributedNetwork
) -> OverlappingPartition:
    partition = OverlappingPartition.from_communities(communities, net.node_count)
    missing = [net.node_ids[v] for v in np.flatnonzero(partition.overlap_counts == 0)]
    if missing:
        shown = ", ".join(missing[:10]) + (" ..." if len(missing) > 10 else "")
        raise PartitionNodeMismatch(f"划分缺少 {len(missing)} 个网络节点: {shown}")
    return partition


def _resolve_ids(ids: Sequence[str], net: AttributedNetwork, where: str) -> List[int]:
    unknown = [node_id for node_id in ids if not net.has_node(node_id)]
    if unknown:
        raise PartitionNodeMismatch(f"{where}: 网络中不存在节点 {', '.join(unknown)}")
    return [net.index_of(node_id) for node_id in ids]


def dataset_paths(name: str) -> dict:
    """内置数据集的文件路径"""
    folder = DATASETS_DIR / name
    gml = folder / f"{name}.gml"
    edges, attributes = folder / "edges.txt", folder / "attributes.csv"
    if edges.exists() and attributes.exists():
        return {"edges": edges, "attributes": attributes}
    if gml.exists():
        return {"gml": gml}
    raise FileNotFoundError(f"数据集 {name!r} 不存在或不完整: {folder}")


def load_input_network(args: argparse.Namespace) -> AttributedNetwork:
    """按 --dataset / --gml / --edges + --attributes 加载网络"""
    if args.dataset:
        paths = dataset_paths(args.dataset)
        if "gml" in paths:
            return load_gml(paths["gml"], drop_isolated=args.drop_isolated)
        return load_network_files(paths["edges"], paths["attributes"], args.drop_isolated)
    if args.gml:
        return load_gml(args.gml, drop_isolated=args.drop_isolated)
    return load_network_files(args.edges, args.attributes, args.drop_isolated)


def resolve_profile(args: argparse.Namespace) -> RunProfile:
    """读取 --config 指定的运行配置，再用命令行参数覆盖"""
    if args.config:
        profile = run_config_loader.load_run_profile(args.config)
    else:
        profile = RunProfile(meta=ProfileMeta(name="cli"))

    overrides = {}
    for flag, name in (
        ("habitats", "n_habitat"),
        ("generations", "generations"),
        ("seed", "seed"),
        ("threshold", "lc_threshold"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "alphas", None) is not None:
        overrides["alphas"] = tuple(args.alphas)
    if getattr(args, "mode", None) is not None:
        overrides["mode"] = RunMode.parse(args.mode)

    execution = profile.execution
    if getattr(args, "parallel", False):
        execution = ExecutionConfig(parallel=True, workers=args.workers or execution.workers)

    runs = args.runs if getattr(args, "runs", None) is not None else profile.runs
    resolved = RunProfile(
        meta=profile.meta, run=replace(profile.run, **overrides), execution=execution, runs=runs
    )
    errors = run_config_loader.validate_profile(resolved)
    if errors:
        raise ConfigInvalid("; ".join(errors))
    return resolved


def cmd_detect(args: argparse.Namespace) -> int:
    """运行社区检测"""
    net = load_input_network(args)
    profile = resolve_profile(args)
    config = profile.run

    callback = None
    if args.progress:
        callback = lambda done, total: progress_bar(done, total)  # noqa: E731

    results = []
    for index in range(profile.runs):
        run_config = config.with_seed(config.seed + index)
        results.append(run(net, run_config, profile.execution, callback))

    writer = ResultWriter(net)
    paths = writer.save(results, args.out, include_trace=args.trace)
    report = writer.build_report(results)

    last_seed = config.seed + profile.runs - 1
    _say(f"模式: {config.mode.value}, 运行 {profile.runs} 次, 种子 {config.seed}..{last_seed}")
    for key, mean in report.mean_alpha_saem().items():
        shown = "NA" if mean is None else f"{mean:.5f}"
        _say(f"α={key}: 平均 best-of-run α_SAEM = {shown}")
    for name, path in paths.items():
        _say(f"{name}: {path}")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    """评估给定划分"""
    net = load_input_network(args)
    if args.partition:
        with open(args.partition, "r", encoding="utf-8") as f:
            partition = parse_partition(f.read(), net)
    else:
        communities = load_solution(args.result, args.run, args.solution)
        partition = _covering_partition(
            [_resolve_ids(ids, net, f"社区 {c}") for c, ids in enumerate(communities)], net
        )

    singletons = sum(1 for community in partition.communities if len(community) == 1)
    if singletons:
        log.w_print(f"划分中有 {singletons} 个单节点社区，已忽略")
        print(f"警告: 忽略 {singletons} 个单节点社区", file=sys.stderr)

    hsi = evaluate_partition(net, partition)
    _say(f"EQ\t{hsi.eq!r}")
    _say(f"SimAtt\t{hsi.simatt!r}")
    for alpha in args.alphas:
        try:
            value = repr(alpha_saem(hsi.simatt, hsi.eq, alpha))
        except MobboError:
            value = "NA"
        _say(f"alpha_saem@{alpha_key(alpha)}\t{value}")
    return EXIT_OK


def cmd_ovset(args: argparse.Namespace) -> int:
    """输出候选重叠节点"""
    net = load_input_network(args)
    ovset = find_ovset(net, args.threshold, derive_rng(args.seed, STREAM_OVSET))
    for v in sorted(ovset):
        print(net.node_ids[v])
    return EXIT_OK


def cmd_list(args: argparse.Namespace) -> int:
    """列出内置数据集"""
    names = []
    if DATASETS_DIR.exists():
        names = sorted(p.name for p in DATASETS_DIR.iterdir() if p.is_dir())
    if not names:
        print("没有找到内置数据集")
        return EXIT_OK

    print("内置数据集:")
    print("=" * 50)
    for name in names:
        try:
            paths = dataset_paths(name)
        except FileNotFoundError:
            print(f"{name}: 文件不完整")
            continue
        files = ", ".join(str(path.relative_to(DATASETS_DIR)) for path in paths.values())
        print(f"{name}: {files}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    """验证运行配置"""
    if args.config_path:
        path = Path(args.config_path)
        if path.is_dir():
            return EXIT_OK if validate_all_configs(path) else 1
        validator = ConfigValidator()
        valid = validator.validate_run_profile(path)
        validator.print_results(path)
        return EXIT_OK if valid else 1
    return EXIT_OK if validate_all_configs(CONFIGS_DIR) else 1


def _network_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("网络输入（三选一）")
    group.add_argument("--edges", metavar="PATH", help="边文件")
    group.add_argument("--attributes", metavar="PATH", help="节点属性 CSV")
    group.add_argument("--gml", metavar="PATH", help="GML 网络文件")
    group.add_argument("--dataset", metavar="NAME", help="datasets/ 下的内置数据集")
    group.add_argument("--drop-isolated", action="store_true", help="丢弃孤立节点而不是报错")
    return parent


def build_parser() -> argparse.ArgumentParser:
    network = _network_parent()
    parser = argparse.ArgumentParser(
        prog="mobbo-ocd",
        description="属性网络重叠社区检测（多目标生物地理学优化）",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
使用示例:
  python main.py detect --dataset fig1 --runs 1 --out results/fig1.json
  python main.py detect --edges e.txt --attributes a.csv --config configs/quick.yaml --out r.json
  python main.py evaluate --dataset fig1 --partition partition.txt
  python main.py evaluate --dataset fig1 --result r.json --run 0 --solution 0
  python main.py ovset --dataset fig1
  python main.py list
  python main.py validate
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command")

    detect = sub.add_parser("detect", parents=[network], help="运行社区检测")
    detect.add_argument("--config", metavar="PATH", help="YAML 运行配置")
    detect.add_argument("--mode", choices=[mode.value for mode in RunMode])
    detect.add_argument("--seed", type=non_negative_int)
    detect.add_argument("--habitats", type=int, help="种群规模（默认 100）")
    detect.add_argument("--generations", type=int, help="进化代数（默认 100）")
    detect.add_argument("--alphas", type=parse_alphas, help="报告用 α 列表（默认 0.5,1,1.5）")
    detect.add_argument("--runs", type=int, help="独立运行次数（第 r 次使用 seed + r）")
    detect.add_argument("--threshold", type=non_negative_float, help="OVSet 的 LC 阈值（默认 0.1）")
    detect.add_argument("--parallel", action="store_true", help="每代内并行演化，结果不变")
    detect.add_argument("--workers", type=int, help="并行线程数")
    detect.add_argument("--trace", action="store_true", help="输出逐代最优 HSI 轨迹")
    detect.add_argument("--progress", action="store_true", help="显示进化进度条")
    detect.add_argument("--out", metavar="PATH", required=True, help="结果文档路径（.json）")
    detect.set_defaults(handler=cmd_detect)

    evaluate = sub.add_parser("evaluate", parents=[network], help="评估给定划分")
    source = evaluate.add_mutually_exclusive_group(required=True)
    source.add_argument("--partition", metavar="PATH", help="划分文件（每行一个社区）")
    source.add_argument("--result", metavar="PATH", help="detect 输出的结果文档")
    evaluate.add_argument("--run", type=int, default=0, help="结果文档中的运行序号")
    evaluate.add_argument("--solution", type=int, default=0, help="该次运行中的解序号")
    evaluate.add_argument("--alphas", type=parse_alphas, default=[0.5, 1.0, 1.5])
    evaluate.set_defaults(handler=cmd_evaluate)

    ovset = sub.add_parser("ovset", parents=[network], help="输出候选重叠节点")
    ovset.add_argument("--threshold", type=non_negative_float, default=DEFAULT_LC_THRESHOLD)
    ovset.add_argument("--seed", type=non_negative_int, default=0)
    ovset.set_defaults(handler=cmd_ovset)

    listing = sub.add_parser("list", help="列出内置数据集")
    listing.set_defaults(handler=cmd_list)

    validate = sub.add_parser("validate", help="验证运行配置")
    validate.add_argument("config_path", nargs="?", help="配置文件或目录（默认 configs/）")
    validate.set_defaults(handler=cmd_validate)

    return parser


def _check_network_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if not hasattr(args, "edges"):
        return
    if args.dataset or args.gml:
        return
    if not (args.edges and args.attributes):
        parser.error("需要 --edges 与 --attributes（或 --dataset / --gml）")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """主函数，处理命令行参数并返回退出码"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not getattr(args, "handler", None):
        parser.print_help()
        return EXIT_USAGE
    _check_network_args(parser, args)

    try:
        return args.handler(args)
    except (InputError, OSError) as e:
        log.e_print(f"输入错误: {e}")
        print(f"输入错误: {e}", file=sys.stderr)
        return EXIT_INPUT
    except MobboError as e:
        log.e_print(f"运行错误: {e}")
        print(f"运行错误: {e}", file=sys.stderr)
        return EXIT_RUNTIME

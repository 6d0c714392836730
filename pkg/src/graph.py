"""
属性网络加载与查询
加载无向无权网络（边文件）与节点分类属性（CSV），校验后生成只读的 AttributedNetwork

边文件格式:
    u v        一条无向边
    u          仅声明节点（无边时即为孤立节点）
    # ...      注释
属性文件格式:
    node,attr1,...,attrK   表头（必需）
    <节点>,<值1>,...,<值K>
"""

import csv
import io
import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import networkx as nx
import numpy as np
from scipy import sparse

from src.errors import (
    EmptyNetwork,
    IsolatedNode,
    MalformedLine,
    MissingAttributeRow,
    OutOfRangeNode,
    SelfLoop,
    UnknownNodeInAttributes,
)
from src.logger_instance import log

logger = logging.getLogger(__name__)

TextSource = Union[str, TextIO]


@dataclass(frozen=True, eq=False)
class AttributedNetwork:
    """带节点属性的无向无权网络（构造后不可变）

    内部节点编号为 0..node_count-1，node_ids 保存对应的外部字符串编号。
    属性值按列驻留为小整数，attribute_values[h][j] 为第 h 列第 j 个取值的原始字符串。
    """

    node_ids: Tuple[str, ...]
    adjacency: Tuple[Tuple[int, ...], ...]
    edge_count: int
    attribute_names: Tuple[str, ...]
    attributes: np.ndarray  # (node_count, attribute_count) int64
    attribute_values: Tuple[Tuple[str, ...], ...]

    def __post_init__(self):
        self.attributes.setflags(write=False)

    @property
    def node_count(self) -> int:
        return len(self.node_ids)

    @property
    def attribute_count(self) -> int:
        return len(self.attribute_names)

    @property
    def attribute_domains(self) -> Tuple[int, ...]:
        """每个属性的不同取值个数"""
        return tuple(len(values) for values in self.attribute_values)

    @cached_property
    def degrees(self) -> np.ndarray:
        degrees = np.array([len(row) for row in self.adjacency], dtype=np.int64)
        degrees.setflags(write=False)
        return degrees

    @cached_property
    def adjacency_matrix(self) -> sparse.csr_matrix:
        """对称 0/1 邻接矩阵（CSR）"""
        rows = np.repeat(np.arange(self.node_count), self.degrees)
        total = int(self.degrees.sum())
        cols = np.fromiter((v for row in self.adjacency for v in row), dtype=np.int64, count=total)
        data = np.ones(len(rows), dtype=np.float64)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.node_count, self.node_count))

    @cached_property
    def attribute_onehot(self) -> Tuple[np.ndarray, ...]:
        """每个属性列的独热矩阵 (node_count, k_h)，用于社区内取值计数"""
        return tuple(
            np.eye(domain, dtype=np.float64)[self.attributes[:, h]]
            for h, domain in enumerate(self.attribute_domains)
        )

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {node_id: i for i, node_id in enumerate(self.node_ids)}

    def neighbors(self, v: int) -> Tuple[int, ...]:
        """返回节点 v 的有序邻居序列"""
        return neighbors(self, v)

    def index_of(self, external_id: str) -> int:
        """外部编号 -> 内部编号，不存在时抛出 KeyError"""
        return self._index[external_id]

    def has_node(self, external_id: str) -> bool:
        return external_id in self._index

    def attribute_label(self, v: int, h: int) -> str:
        return self.attribute_values[h][self.attributes[v, h]]


def neighbors(net: AttributedNetwork, v: int) -> Tuple[int, ...]:
    """返回节点 v 的邻接行（升序、无重复）"""
    if not 0 <= v < net.node_count:
        raise OutOfRangeNode(f"节点编号 {v} 超出范围 [0, {net.node_count})")
    return net.adjacency[v]


def _iter_lines(source: TextSource) -> List[str]:
    if isinstance(source, str):
        return source.splitlines()
    return source.read().splitlines()


def _parse_edges(lines: Sequence[str]) -> Tuple[List[str], set]:
    """解析边文件，返回 (按首次出现顺序的节点列表, 外部编号边集合)"""
    order: Dict[str, None] = {}
    edges = set()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) == 1:
            order.setdefault(tokens[0], None)
        elif len(tokens) == 2:
            u, v = tokens
            if u == v:
                raise SelfLoop(f"第 {line_no} 行: 节点 {u!r} 存在自环")
            order.setdefault(u, None)
            order.setdefault(v, None)
            edges.add((u, v) if u < v else (v, u))
        else:
            raise MalformedLine("边文件每行应为 'u v'", line_no, raw)
    if not edges:
        raise EmptyNetwork("边文件中没有任何边")
    return list(order), edges


def _parse_attributes(lines: Sequence[str]) -> Tuple[List[str], Dict[str, List[str]]]:
    """解析属性 CSV，返回 (属性名列表, 节点 -> 取值列表)"""
    numbered = [
        (line_no, raw)
        for line_no, raw in enumerate(lines, start=1)
        if raw.strip() and not raw.lstrip().startswith("#")
    ]
    if not numbered:
        raise MalformedLine("属性文件缺少表头")

    reader = csv.reader(raw for _, raw in numbered)
    header = [cell.strip() for cell in next(reader)]
    if len(header) < 2:
        raise MalformedLine("属性文件表头至少需要节点列和一个属性列", numbered[0][0], numbered[0][1])

    rows: Dict[str, List[str]] = {}
    for (line_no, raw), row in zip(numbered[1:], reader):
        cells = [cell.strip() for cell in row]
        if len(cells) != len(header):
            raise MalformedLine(f"属性行应有 {len(header)} 列，实际 {len(cells)} 列", line_no, raw)
        node_id = cells[0]
        if node_id in rows:
            raise MalformedLine(f"节点 {node_id!r} 的属性行重复", line_no, raw)
        rows[node_id] = cells[1:]
    return header[1:], rows


def build_network(
    declared: Sequence[str],
    edges: Iterable[Tuple[str, str]],
    attribute_names: Sequence[str],
    attribute_rows: Dict[str, List[str]],
    drop_isolated: bool = False,
) -> AttributedNetwork:
    """由外部编号的节点/边/属性构造并校验网络"""
    edges = list(edges)
    declared_set = set(declared)
    for node_id in attribute_rows:
        if node_id not in declared_set:
            raise UnknownNodeInAttributes(f"属性文件中的节点 {node_id!r} 未在边文件中出现")

    degree: Dict[str, int] = {node_id: 0 for node_id in declared}
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1

    isolated = [node_id for node_id in declared if degree[node_id] == 0]
    if isolated:
        if not drop_isolated:
            raise IsolatedNode(f"存在 {len(isolated)} 个孤立节点（如 {isolated[0]!r}），可使用 --drop-isolated")
        log.w_print(f"丢弃 {len(isolated)} 个孤立节点")

    kept = [node_id for node_id in declared if degree[node_id] > 0]
    index = {node_id: i for i, node_id in enumerate(kept)}

    missing = [node_id for node_id in kept if node_id not in attribute_rows]
    if missing:
        raise MissingAttributeRow(f"节点 {missing[0]!r} 缺少属性行（共 {len(missing)} 个）")

    adjacency: List[set] = [set() for _ in kept]
    for u, v in edges:
        iu, iv = index[u], index[v]
        adjacency[iu].add(iv)
        adjacency[iv].add(iu)

    # 属性值按内部节点顺序驻留，保证写出后再加载编号一致
    attribute_count = len(attribute_names)
    interned = np.zeros((len(kept), attribute_count), dtype=np.int64)
    values: List[Dict[str, int]] = [{} for _ in range(attribute_count)]
    for i, node_id in enumerate(kept):
        for h, value in enumerate(attribute_rows[node_id]):
            interned[i, h] = values[h].setdefault(value, len(values[h]))

    net = AttributedNetwork(
        node_ids=tuple(kept),
        adjacency=tuple(tuple(sorted(row)) for row in adjacency),
        edge_count=len(edges),
        attribute_names=tuple(attribute_names),
        attributes=interned,
        attribute_values=tuple(tuple(column) for column in values),
    )
    logger.info(f"加载网络: {net.node_count} 个节点, {net.edge_count} 条边, {attribute_count} 个属性")
    return net


def load_network(
    edge_text: TextSource, attribute_text: TextSource, drop_isolated: bool = False
) -> AttributedNetwork:
    """从边文本与属性 CSV 文本加载属性网络

    重复边会被合并；自环、格式错误、属性缺失等问题抛出 InputError 子类。
    """
    declared, edges = _parse_edges(_iter_lines(edge_text))
    attribute_names, attribute_rows = _parse_attributes(_iter_lines(attribute_text))
    return build_network(declared, sorted(edges), attribute_names, attribute_rows, drop_isolated)


def load_network_files(
    edges_path: Union[str, Path], attributes_path: Union[str, Path], drop_isolated: bool = False
) -> AttributedNetwork:
    """按路径加载边文件与属性文件"""
    with open(edges_path, "r", encoding="utf-8") as edge_file, open(
        attributes_path, "r", encoding="utf-8", newline=""
    ) as attribute_file:
        return load_network(edge_file, attribute_file, drop_isolated)


def load_gml(
    path: Union[str, Path],
    attribute_keys: Optional[Sequence[str]] = None,
    drop_isolated: bool = False,
) -> AttributedNetwork:
    """加载 GML 网络（如 Football 数据集，属性 value 为联盟编号）

    Args:
        path: GML 文件路径
        attribute_keys: 作为节点属性的键，默认使用除 label 外的全部节点数据键
        drop_isolated: 是否丢弃孤立节点
    """
    graph = nx.read_gml(str(path), label="id")
    if graph.is_directed():
        graph = graph.to_undirected()
    graph = nx.Graph(graph)

    if attribute_keys is None:
        keys = sorted({key for _, data in graph.nodes(data=True) for key in data if key != "label"})
    else:
        keys = list(attribute_keys)
    if not keys:
        raise MissingAttributeRow(f"GML 文件 {path} 中没有节点属性")

    declared = [str(node) for node in graph.nodes]
    rows: Dict[str, List[str]] = {}
    for node, data in graph.nodes(data=True):
        if all(key in data for key in keys):
            rows[str(node)] = [str(data[key]) for key in keys]

    edges = []
    for u, v in graph.edges:
        if u == v:
            raise SelfLoop(f"GML 中节点 {u!r} 存在自环")
        su, sv = str(u), str(v)
        edges.append((su, sv) if su < sv else (sv, su))
    if not edges:
        raise EmptyNetwork("GML 文件中没有任何边")
    return build_network(declared, sorted(set(edges)), keys, rows, drop_isolated)


def write_network(net: AttributedNetwork) -> Tuple[str, str]:
    """输出 (边文本, 属性 CSV 文本)，重新加载后与原网络逐位一致"""
    edge_lines = ["# nodes"]
    edge_lines.extend(net.node_ids)
    edge_lines.append("# edges")
    for u, row in enumerate(net.adjacency):
        for v in row:
            if u < v:
                edge_lines.append(f"{net.node_ids[u]} {net.node_ids[v]}")

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["node", *net.attribute_names])
    for v, node_id in enumerate(net.node_ids):
        writer.writerow([node_id, *(net.attribute_label(v, h) for h in range(net.attribute_count))])
    return "\n".join(edge_lines) + "\n", buffer.getvalue()

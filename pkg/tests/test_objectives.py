"""
测试目标函数：扩展模块度、模块度、属性相似度与 α_SAEM
"""

import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import (
    DegenerateDenominator,
    EmptyAfterSingletonDrop,
    EmptyPartition,
    OverlapPresent,
)
from src.objectives import (
    ObjectiveVector,
    alpha_saem,
    evaluate_hsi,
    evaluate_partition,
    extended_modularity,
    modularity,
    sim_att,
)
from src.olar import OverlappingPartition, make_habitat
from tests.helpers.network_builder import (
    NetworkBuilder,
    from_networkx,
    random_network,
    random_partition,
)
from tests.helpers.oracles import pairwise_eq


def partition_of(net, *communities):
    """用外部编号构造划分"""
    return OverlappingPartition.from_communities(
        [[net.index_of(str(v)) for v in community] for community in communities], net.node_count
    )


class TestExtendedModularity:
    """扩展模块度测试类"""

    def test_fig1_overlapping(self, fig1_net):
        """两个三角形共享节点 3：EQ = 1/6"""
        partition = partition_of(fig1_net, [1, 2, 3], [3, 4, 5])
        assert extended_modularity(fig1_net, partition) == pytest.approx(1 / 6)

    def test_fig1_disjoint(self, fig1_net):
        partition = partition_of(fig1_net, [1, 2, 3], [4, 5])
        assert extended_modularity(fig1_net, partition) == pytest.approx(1 / 9)
        assert modularity(fig1_net, partition) == pytest.approx(1 / 9)

    def test_single_community_is_zero(self, fig1_net):
        partition = partition_of(fig1_net, [1, 2, 3, 4, 5])
        assert extended_modularity(fig1_net, partition) == pytest.approx(0.0)

    def test_two_disconnected_triangles(self, two_disconnected_triangles):
        partition = OverlappingPartition.from_communities([[0, 1, 2], [3, 4, 5]], 6)
        assert extended_modularity(two_disconnected_triangles, partition) == pytest.approx(0.5)

    def test_path2(self, path2_net):
        partition = OverlappingPartition.from_communities([[0, 1]], 2)
        assert extended_modularity(path2_net, partition) == pytest.approx(0.0)

    def test_empty_partition(self, fig1_net):
        with pytest.raises(EmptyPartition):
            extended_modularity(fig1_net, OverlappingPartition.from_communities([], 5))

    @pytest.mark.parametrize("seed", range(15))
    def test_matches_pairwise_sum(self, seed):
        """与逐个节点对累加的结果一致（含重叠）"""
        rng = np.random.default_rng(seed)
        net = random_network(rng, 14, 0.3)
        communities = random_partition(net.node_count, rng, overlap=True)
        partition = OverlappingPartition.from_communities(communities, net.node_count)
        assert extended_modularity(net, partition) == pytest.approx(
            pairwise_eq(net, communities), abs=1e-12
        )

    @pytest.mark.parametrize("seed", range(10))
    def test_equals_modularity_when_disjoint(self, seed):
        """不重叠时 EQ 与 Q 相等，并与 networkx 的模块度一致"""
        rng = np.random.default_rng(seed)
        graph = nx.gnp_random_graph(16, 0.3, seed=seed)
        graph.remove_nodes_from([v for v in list(graph.nodes) if graph.degree(v) == 0])
        net = from_networkx(graph, rng)
        communities = random_partition(net.node_count, rng)
        partition = OverlappingPartition.from_communities(communities, net.node_count)
        eq = extended_modularity(net, partition)
        assert eq == pytest.approx(modularity(net, partition), abs=1e-12)
        external = [{int(net.node_ids[v]) for v in c} for c in communities]
        assert eq == pytest.approx(nx.community.modularity(graph, external), abs=1e-12)

    @pytest.mark.parametrize("seed", range(100))
    def test_random_graphs_disjoint_and_whole(self, seed):
        """随机图（n <= 40）上不重叠划分 |EQ - Q| <= 1e-12，单一社区 |EQ| <= 1e-12"""
        rng = np.random.default_rng(5000 + seed)
        n = int(rng.integers(2, 41))
        net = random_network(rng, n, float(rng.uniform(0.05, 0.5)))
        communities = random_partition(n, rng, max_communities=6)
        partition = OverlappingPartition.from_communities(communities, n)
        assert abs(extended_modularity(net, partition) - modularity(net, partition)) <= 1e-12
        whole = OverlappingPartition.from_communities([range(n)], n)
        assert abs(extended_modularity(net, whole)) <= 1e-12

    @pytest.mark.slow
    def test_thousand_overlapping_partitions(self):
        """12 个节点以内的随机重叠划分与有序节点对暴力求和一致"""
        rng = np.random.default_rng(606)
        for _ in range(1000):
            net = random_network(rng, int(rng.integers(3, 13)), float(rng.uniform(0.15, 0.6)))
            communities = random_partition(net.node_count, rng, overlap=True)
            partition = OverlappingPartition.from_communities(communities, net.node_count)
            expected = pairwise_eq(net, communities)
            assert abs(extended_modularity(net, partition) - expected) <= 1e-12

    def test_modularity_rejects_overlap(self, fig1_net):
        with pytest.raises(OverlapPresent):
            modularity(fig1_net, partition_of(fig1_net, [1, 2, 3], [3, 4, 5]))

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10_000))
    def test_bounds(self, seed):
        """覆盖全部节点的划分满足 -1 <= EQ <= 1"""
        rng = np.random.default_rng(seed)
        net = random_network(rng, 10, 0.35)
        communities = random_partition(net.node_count, rng, overlap=True)
        eq = extended_modularity(
            net, OverlappingPartition.from_communities(communities, net.node_count)
        )
        assert -1.0 - 1e-12 <= eq <= 1.0 + 1e-12

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10_000))
    def test_community_order_irrelevant(self, seed):
        rng = np.random.default_rng(seed)
        net = random_network(rng, 10, 0.35)
        communities = random_partition(net.node_count, rng, overlap=True)
        forward = OverlappingPartition.from_communities(communities, net.node_count)
        backward = OverlappingPartition.from_communities(communities[::-1], net.node_count)
        assert extended_modularity(net, forward) == pytest.approx(
            extended_modularity(net, backward), abs=1e-12
        )


class TestSimAtt:
    """属性相似度测试类"""

    def test_fig1_values(self, fig1_net):
        assert sim_att(fig1_net, partition_of(fig1_net, [1, 2, 3], [3, 4, 5])) == pytest.approx(
            5 / 6
        )
        assert sim_att(fig1_net, partition_of(fig1_net, [1, 2, 3], [4, 5])) == pytest.approx(1.0)
        assert sim_att(fig1_net, partition_of(fig1_net, [1, 2], [3, 4, 5])) == pytest.approx(5 / 6)
        assert sim_att(fig1_net, partition_of(fig1_net, [1, 2, 3, 4, 5])) == pytest.approx(0.6)

    def test_multiple_attributes(self):
        """两个属性：社区 {a,b} 中一个属性一致、一个不一致，得 3/4"""
        builder = NetworkBuilder(["color", "size"]).edge("a", "b")
        builder.attributes("a", "red", "big").attributes("b", "red", "small")
        net = builder.build()
        partition = OverlappingPartition.from_communities([[0, 1]], 2)
        assert sim_att(net, partition) == pytest.approx(0.75)

    def test_mean_over_communities(self):
        """{a,b,c,d}: 3/4；{e,f}: 1；均值 0.875"""
        edges = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f")]
        builder = NetworkBuilder().edges(edges)
        for node_id, value in zip("abcdef", ["x", "x", "x", "y", "z", "z"]):
            builder.attributes(node_id, value)
        net = builder.build()
        partition = partition_of(net, "abcd", "ef")
        assert sim_att(net, partition) == pytest.approx((0.75 + 1.0) / 2)

    def test_singletons_ignored(self, path2_net):
        partition = OverlappingPartition.from_communities([[0], [1]], 2)
        with pytest.raises(EmptyPartition):
            sim_att(path2_net, partition)
        whole = OverlappingPartition.from_communities([[0, 1], [1]], 2)
        assert sim_att(path2_net, whole) == pytest.approx(0.5)

    def test_identical_attributes(self, two_disconnected_triangles):
        partition = OverlappingPartition.from_communities([[0, 1, 2, 3], [3, 4, 5]], 6)
        assert sim_att(two_disconnected_triangles, partition) == pytest.approx(1.0)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10_000))
    def test_bounds(self, seed):
        """SimAtt 落在 (0, 1] 内"""
        rng = np.random.default_rng(seed)
        net = random_network(rng, 10, 0.35, attribute_count=2, domain=4)
        communities = random_partition(net.node_count, rng, overlap=True)
        partition = OverlappingPartition.from_communities(communities, net.node_count)
        if partition.drop_singletons().community_count == 0:
            return
        value = sim_att(net, partition)
        assert 0.0 < value <= 1.0 + 1e-12


class TestAlphaSaem:
    """α_SAEM 测试类"""

    def test_harmonic_mean(self):
        assert alpha_saem(0.8, 0.4, 1.0) == pytest.approx(2 * 0.8 * 0.4 / 1.2)
        assert alpha_saem(0.8, 0.4, 1.0) == pytest.approx(0.5333333333)

    def test_alpha_zero_is_simatt(self):
        assert alpha_saem(0.8, 0.4, 0.0) == pytest.approx(0.8)

    def test_large_alpha_tends_to_eq(self):
        assert alpha_saem(0.8, 0.4, 1e4) == pytest.approx(0.4, rel=1e-6)

    @settings(max_examples=1000, deadline=None)
    @given(
        simatt=st.floats(min_value=1e-6, max_value=1.0),
        eq=st.floats(min_value=1e-6, max_value=1.0),
    )
    def test_limits_and_harmonic_form(self, simatt, eq):
        """极小 α 趋于 SimAtt，极大 α 趋于 EQ，α = 1 为调和平均"""
        assert abs(alpha_saem(simatt, eq, 1e-6) - simatt) <= 1e-4
        assert abs(alpha_saem(simatt, eq, 1e6) - eq) <= 1e-4
        harmonic = 2.0 * simatt * eq / (simatt + eq)
        assert abs(alpha_saem(simatt, eq, 1.0) - harmonic) <= 1e-12
        assert alpha_saem(simatt, eq, 1.0) == pytest.approx(alpha_saem(eq, simatt, 1.0), abs=1e-12)

    @pytest.mark.parametrize("simatt,eq", [(0.5, 0.5), (1.0, 0.2), (0.3, 0.7)])
    def test_between_objectives(self, simatt, eq):
        for alpha in (0.5, 1.0, 1.5):
            value = alpha_saem(simatt, eq, alpha)
            assert min(simatt, eq) - 1e-12 <= value <= max(simatt, eq) + 1e-12

    def test_negative_alpha(self):
        with pytest.raises(ValueError):
            alpha_saem(0.5, 0.5, -1.0)

    def test_degenerate_denominator(self):
        with pytest.raises(DegenerateDenominator):
            alpha_saem(0.0, 0.0, 1.0)
        with pytest.raises(DegenerateDenominator):
            alpha_saem(0.5, -0.5, 1.0)

    def test_negative_eq_uses_formula(self):
        value = alpha_saem(0.5, -0.1, 1.0)
        assert value == pytest.approx(2 * 0.5 * -0.1 / 0.4)
        assert not math.isnan(value)


class TestEvaluate:
    """HSI 计算测试类"""

    def test_evaluate_hsi_caches(self, fig1_net):
        habitat = make_habitat(fig1_net, [1, 0, 0, 4, 3], [0, 0, 1, 0, 0])
        hsi = evaluate_hsi(fig1_net, habitat)
        assert hsi.as_tuple() == pytest.approx((1 / 6, 5 / 6))
        assert evaluate_hsi(fig1_net, habitat) is hsi

    def test_evaluate_decodes_when_needed(self, fig1_net):
        from src.olar import Habitat

        habitat = Habitat(siv=np.array([1, 0, 0, 4, 3]), status=np.zeros(5, dtype=np.int8))
        hsi = evaluate_hsi(fig1_net, habitat)
        assert isinstance(hsi, ObjectiveVector)
        assert hsi.as_tuple() == pytest.approx((1 / 9, 1.0))
        assert habitat.partition is not None

    def test_path2_whole(self, path2_net):
        habitat = make_habitat(path2_net, [1, 0])
        hsi = evaluate_hsi(path2_net, habitat)
        assert hsi.eq == pytest.approx(0.0)
        assert hsi.simatt == pytest.approx(0.5)

    def test_evaluate_partition_drops_singletons(self, fig1_net):
        partition = partition_of(fig1_net, [1, 2, 3], [4, 5], [4])
        hsi = evaluate_partition(fig1_net, partition)
        assert hsi.as_tuple() == pytest.approx((1 / 9, 1.0))

    def test_evaluate_partition_all_singletons(self, path2_net):
        partition = OverlappingPartition.from_communities([[0], [1]], 2)
        with pytest.raises(EmptyAfterSingletonDrop):
            evaluate_partition(path2_net, partition)

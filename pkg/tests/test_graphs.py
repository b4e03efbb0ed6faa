from itertools import permutations

import networkx as nx
import pytest
from hypothesis import given, settings as hypothesis_settings
import hypothesis.strategies as st

from threshold_lab.core.exceptions import GroundSetTooLarge, NotBipartite
from threshold_lab.core.graphs import (
    bipartite_subgraph,
    count_closed,
    count_good_candidates,
    enumerate_maximal_triangle_free,
    find_triangle,
    goodness_implies_hitting_check,
    graph_from_json,
    graph_from_text,
    graph_to_json,
    graph_to_text,
    h_good_edges,
    is_bipartite,
    is_maximal_triangle_free,
    is_triangle_free,
    maximal_triangle_free,
    maximal_triangle_free_ordered,
    square,
    two_colouring,
)
from threshold_lab.core.random_models import sample_gnp
from threshold_lab.core.seeding import trial_rng
from threshold_lab.model import EdgeSet, Graph, edge_index, edge_pairs, pair_count


def graphs(max_n=7):
    return st.integers(3, max_n).flatmap(
        lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n).map(
            lambda pairs: Graph.from_edges(n, [(u, v) for u, v in pairs if u != v])
        )
    )


def to_networkx(graph: Graph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    g.add_edges_from(graph.edges())
    return g


def brute_force_maximal(host: Graph) -> set:
    edges = host.edges()
    found = set()
    for bits in range(1 << len(edges)):
        g = Graph.from_edges(host.n, [e for i, e in enumerate(edges) if bits >> i & 1])
        if is_maximal_triangle_free(g, host):
            found.add(g)
    return found


def test_edge_index_is_row_major():
    assert [edge_index(u, v, 4) for u, v in edge_pairs(4)] == list(range(6))
    assert edge_index(3, 2, 4) == 5
    with pytest.raises(ValueError):
        edge_index(1, 1, 4)


def test_edge_set_round_trip():
    graph = Graph.petersen()
    assert graph.to_edge_set().to_graph() == graph
    assert len(graph.to_edge_set()) == 15
    assert EdgeSet(4, 0b100001).edges() == [(0, 1), (2, 3)]


def test_builders():
    assert Graph.complete(5).edge_count == pair_count(5)
    assert Graph.cycle(5).max_degree == 2
    assert Graph.star(6, 5).degree(0) == 5
    assert Graph.matching(8, 4).edge_count == 4
    assert Graph.wagner().edge_count == 12
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 0)])


@pytest.mark.parametrize(
    "adj",
    [
        (0b010, 0b000, 0b000),  # 0 -> 1 only
        (0b001, 0b000, 0b000),  # self-loop at 0
        (0b1000, 0b000, 0b000),  # neighbour 3 on three vertices
    ],
)
def test_raw_adjacency_is_validated(adj):
    with pytest.raises(ValueError):
        Graph(3, adj)


def test_add_edge_refuses_self_loops():
    assert Graph.empty(3).add_edge(0, 2).edges() == [(0, 2)]
    with pytest.raises(ValueError):
        Graph.empty(3).add_edge(1, 1)


def test_triangles():
    assert is_triangle_free(Graph.cycle(5))
    assert is_triangle_free(Graph.petersen())
    assert is_triangle_free(Graph.wagner())
    assert not is_triangle_free(Graph.complete(3))
    assert find_triangle(Graph.complete(4)) == (0, 1, 2)
    assert find_triangle(Graph.cycle(4)) is None


@given(graph=graphs(9))
@hypothesis_settings(max_examples=200, deadline=None)
def test_triangle_free_matches_networkx(graph):
    assert is_triangle_free(graph) == (sum(nx.triangles(to_networkx(graph)).values()) == 0)


def test_square_of_a_path():
    assert square(Graph.path(3)).edges() == [(0, 2)]
    assert square(Graph.empty(4)).edge_count == 0


@given(graph=graphs(), extra=st.lists(st.tuples(st.integers(0, 2), st.integers(3, 6)), max_size=6))
@hypothesis_settings(max_examples=200, deadline=None)
def test_square_is_monotone(graph, extra):
    larger = graph
    for u, v in extra:
        if v < graph.n:
            larger = larger.add_edge(u, v)
    assert square(graph).is_subgraph_of(square(larger))


@given(graph=graphs(8), seed=st.integers(0, 2**32))
@hypothesis_settings(max_examples=150, deadline=None)
def test_greedy_subgraph_is_maximal(graph, seed):
    result = maximal_triangle_free(graph, seed)
    assert is_maximal_triangle_free(result, graph)


def test_greedy_on_k4_gives_squares_and_stars():
    host = Graph.complete(4)
    shapes = set()
    for order in permutations(host.edges()):
        result = maximal_triangle_free_ordered(host, order)
        assert is_maximal_triangle_free(result, host)
        if result.edge_count == 4:
            assert all(result.degree(v) == 2 for v in range(4))
            shapes.add("C4")
        else:
            assert result.edge_count == 3 and result.max_degree == 3
            shapes.add("K13")
    assert shapes == {"C4", "K13"}


def test_enumeration_of_k4():
    found = list(enumerate_maximal_triangle_free(Graph.complete(4)))
    assert len(found) == 7
    assert len(set(found)) == 7


@pytest.mark.parametrize("seed", range(6))
def test_enumeration_matches_brute_force(seed):
    host = sample_gnp(6, 0.6, seed)
    if host.edge_count > 12:
        host = Graph.from_edges(6, host.edges()[:12])
    assert set(enumerate_maximal_triangle_free(host)) == brute_force_maximal(host)


def test_enumeration_parts_partition_the_search():
    host = Graph.complete(5)
    whole = set(enumerate_maximal_triangle_free(host))
    parts = []
    for bits in range(8):
        parts.extend(enumerate_maximal_triangle_free(host, prefix=(bits, 3)))
    assert len(parts) == len(whole)
    assert set(parts) == whole


def test_enumeration_with_avoided_graph():
    host = Graph.complete(4)
    avoid = Graph.from_edges(4, [(0, 1)])
    found = list(enumerate_maximal_triangle_free(host, avoid=avoid))
    assert found
    assert all(not g.intersects(avoid) for g in found)


def test_enumeration_refuses_large_hosts():
    with pytest.raises(GroundSetTooLarge):
        next(enumerate_maximal_triangle_free(Graph.complete(8)))


def test_lone_edge_is_good():
    h = Graph.from_edges(4, [(0, 1)])
    assert h_good_edges(h, h).edges() == [(0, 1)]
    assert count_good_candidates(h, h) == 1


def test_closed_edges_of_a_star():
    gamma = Graph.star(5, 4)
    h = Graph.from_edges(5, [(1, 2), (3, 4), (0, 1)])
    assert count_closed(h, gamma) == 2
    assert len(h_good_edges(h, gamma)) == 1


def test_goodness_implies_hitting_on_random_pairs():
    for index in range(40):
        rng = trial_rng(17, index)
        n = int(rng.integers(4, 7))
        gamma = sample_gnp(n, 0.6, rng)
        h = sample_gnp(n, 0.4, rng)
        report = goodness_implies_hitting_check(h, gamma)
        assert report["counterexample"] is None


def test_goodness_check_sampled_mode():
    h = Graph.from_edges(5, [(0, 1)])
    gamma = Graph.complete(5).difference(Graph.from_edges(5, [(0, 2), (0, 3), (0, 4)]))
    report = goodness_implies_hitting_check(h, gamma, mode="sampled", samples=30, seed=1)
    assert report["good_edges"] == 1
    assert report["examined"] == 30
    assert report["counterexample"] is None


@pytest.mark.slow
def test_goodness_implies_hitting_exhaustively():
    violations = 0
    for index in range(1000):
        rng = trial_rng(2024, index)
        n = int(rng.integers(4, 8))
        gamma = sample_gnp(n, float(rng.uniform(0.3, 0.8)), rng)
        h = sample_gnp(n, float(rng.uniform(0.1, 0.5)), rng)
        violations += goodness_implies_hitting_check(h, gamma)["counterexample"] is not None
    assert violations == 0


def test_two_colouring():
    assert two_colouring(Graph.cycle(4)) == (0, 1, 0, 1)
    assert is_bipartite(Graph.star(6, 5))
    with pytest.raises(NotBipartite):
        two_colouring(Graph.cycle(5))


@given(graph=graphs(9))
@hypothesis_settings(max_examples=100, deadline=None)
def test_bipartite_subgraph_keeps_half_the_edges(graph):
    sub = bipartite_subgraph(graph)
    assert sub.is_subgraph_of(graph)
    assert is_bipartite(sub)
    assert 2 * sub.edge_count >= graph.edge_count


def test_serialisation():
    graph = Graph.wagner()
    assert graph_from_json(graph_to_json(graph)) == graph
    assert graph_from_text(graph_to_text(graph)) == graph
    assert graph_from_text("3\n0 1\n1 2\n").edges() == [(0, 1), (1, 2)]
    with pytest.raises(ValueError):
        graph_from_text("3 0")


def test_induced_edge_count():
    graph = Graph.complete(5)
    mask = 0
    for v in (0, 2, 4):
        mask |= 1 << v
    assert graph.induced_edge_count(mask) == 3

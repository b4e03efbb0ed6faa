"""
Deterministic graph machinery: triangles, graph squares, maximal
triangle-free subgraphs and good edges.
"""

import logging
from typing import Iterator, List, Optional, Sequence, Tuple

from threshold_lab.core.exceptions import GroundSetTooLarge, NotBipartite
from threshold_lab.core.seeding import SeedLike, as_generator
from threshold_lab.model.graph import EdgeSet, Graph
from threshold_lab.model.ground_set import iter_bits
from threshold_lab.schemas.graph import GraphSchema

logger = logging.getLogger(__name__)

# Enumerating all maximal triangle-free subgraphs is only offered up to here
ENUMERATION_LIMIT = 7


def is_triangle_free(graph: Graph) -> bool:
    adj = graph.adj
    for u in range(graph.n):
        for v in iter_bits(adj[u] >> (u + 1) << (u + 1)):
            if adj[u] & adj[v]:
                return False
    return True


def find_triangle(graph: Graph) -> Optional[Tuple[int, int, int]]:
    adj = graph.adj
    for u in range(graph.n):
        for v in iter_bits(adj[u] >> (u + 1) << (u + 1)):
            common = adj[u] & adj[v]
            if common:
                w = (common & -common).bit_length() - 1
                return tuple(sorted((u, v, w)))
    return None


def square(graph: Graph) -> Graph:
    """
    Pairs of distinct vertices with a common neighbour. Edges of the graph
    itself are only present if they also have a common neighbour.
    """
    adj = graph.adj
    rows = []
    for u in range(graph.n):
        row = 0
        for v in iter_bits(adj[u]):
            row |= adj[v]
        rows.append(row & ~(1 << u))
    return Graph(graph.n, tuple(rows))


def maximal_triangle_free_ordered(host: Graph, order: Sequence[Tuple[int, int]]) -> Graph:
    """Greedy insertion of the host edges in the given order."""
    adj = [0] * host.n
    for u, v in order:
        if not host.has_edge(u, v):
            raise ValueError(f"({u}, {v}) is not an edge of the host graph")
        if adj[u] & adj[v] == 0:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return Graph(host.n, tuple(adj))


def maximal_triangle_free(host: Graph, seed: SeedLike) -> Graph:
    """
    A maximal triangle-free subgraph of ``host``, built by greedy insertion
    over a uniformly random order of its edges.
    """
    edges = host.edges()
    if not edges:
        return Graph.empty(host.n)
    rng = as_generator(seed)
    order = rng.permutation(len(edges))
    return maximal_triangle_free_ordered(host, [edges[i] for i in order])


def is_maximal_triangle_free(graph: Graph, host: Graph) -> bool:
    if not graph.is_subgraph_of(host) or not is_triangle_free(graph):
        return False
    adj = graph.adj
    return all(adj[u] & adj[v] for u, v in host.difference(graph).edges())


def enumerate_maximal_triangle_free(
    host: Graph,
    avoid: Optional[Graph] = None,
    prefix: Tuple[int, int] = (0, 0),
) -> Iterator[Graph]:
    """
    Yields every maximal triangle-free subgraph of ``host``; with ``avoid``
    only those sharing no edge with it. ``prefix = (bits, length)`` fixes the
    choice for the first ``length`` host edges: edge i is taken iff bit i is set.

    Backtracks over the host edges in a fixed order. An edge left out has to
    end up closing a triangle; a branch is cut as soon as some left-out edge
    can no longer get a common neighbour from the chosen and remaining edges.
    """
    n = host.n
    if n > ENUMERATION_LIMIT:
        raise GroundSetTooLarge(n, ENUMERATION_LIMIT, what="vertex count")
    edges = host.edges()
    forbidden = avoid.adj if avoid is not None else (0,) * n
    prefix_bits, prefix_length = prefix

    # future[i][x]: neighbours of x through edges i, i+1, ...
    future: List[Tuple[int, ...]] = [()] * (len(edges) + 1)
    rows = [0] * n
    future[len(edges)] = tuple(rows)
    for i in range(len(edges) - 1, -1, -1):
        u, v = edges[i]
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        future[i] = tuple(rows)

    adj = [0] * n

    def blockable(pending: List[Tuple[int, int]], i: int) -> bool:
        ahead = future[i]
        for u, v in pending:
            if adj[u] & adj[v]:
                continue
            if (adj[u] | ahead[u]) & (adj[v] | ahead[v]) == 0:
                return False
        return True

    def backtrack(i: int, pending: List[Tuple[int, int]]) -> Iterator[Graph]:
        if not blockable(pending, i):
            return
        if i == len(edges):
            yield Graph(n, tuple(adj))
            return
        u, v = edges[i]
        closes = adj[u] & adj[v]
        fixed = i < prefix_length
        take = not fixed or prefix_bits >> i & 1
        if fixed and take and closes:
            return
        if take and not closes and not forbidden[u] >> v & 1:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            yield from backtrack(i + 1, pending)
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        if fixed and take:
            return
        yield from backtrack(i + 1, pending if closes else pending + [(u, v)])

    yield from backtrack(0, [])


def h_good_edges(h: Graph, host: Graph) -> EdgeSet:
    """Edges of H present in the host that lie outside the square of host minus H."""
    outside = square(host.difference(h))
    return h.intersection(host).difference(outside).to_edge_set()


def count_good_candidates(h: Graph, host: Graph) -> int:
    return h.difference(square(host.difference(h))).edge_count


def count_closed(h: Graph, host: Graph) -> int:
    return h.intersection(square(host)).edge_count


def goodness_implies_hitting_check(
    h: Graph,
    host: Graph,
    mode: str = "exhaustive",
    samples: int = 100,
    seed: SeedLike = 0,
) -> dict:
    """
    If the host holds an H-good edge, no maximal triangle-free subgraph of the
    host may miss H.

    Parameters:
    - h, host: graphs on the same vertex set.
    - mode: "exhaustive" searches every maximal triangle-free subgraph
      (n <= 7), "sampled" draws ``samples`` random greedy ones.
    Returns:
    - A dictionary with the number of good edges, the number of subgraphs
      examined and the first counterexample found (None when the check passes).
    """
    h._same_order(host)
    good = len(h_good_edges(h, host))
    report = {"mode": mode, "good_edges": good, "examined": 0, "counterexample": None}
    if not good:
        return report
    if mode == "exhaustive":
        # a maximal subgraph avoiding H is exactly a counterexample
        for graph in enumerate_maximal_triangle_free(host, avoid=h):
            report["counterexample"] = graph
            break
        report["examined"] = None
    elif mode == "sampled":
        rng = as_generator(seed)
        for _ in range(samples):
            graph = maximal_triangle_free(host, rng)
            report["examined"] += 1
            if not graph.intersects(h):
                report["counterexample"] = graph
                break
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if report["counterexample"] is not None:
        logger.error(f"Maximal triangle-free subgraph misses H despite {good} good edges")
    return report


def two_colouring(graph: Graph) -> Tuple[int, ...]:
    """Colour 0/1 per vertex, least vertex of every component coloured 0."""
    colour = [-1] * graph.n
    for root in range(graph.n):
        if colour[root] >= 0:
            continue
        colour[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for v in iter_bits(graph.adj[u]):
                if colour[v] < 0:
                    colour[v] = 1 - colour[u]
                    stack.append(v)
                elif colour[v] == colour[u]:
                    raise NotBipartite(f"odd cycle through vertices {u} and {v}")
    return tuple(colour)


def is_bipartite(graph: Graph) -> bool:
    try:
        two_colouring(graph)
    except NotBipartite:
        return False
    return True


def bipartite_subgraph(graph: Graph) -> Graph:
    """
    Local-search max cut: moves a vertex across while it has more neighbours
    on its own side. Keeps at least half of the edges.
    """
    side = 0
    improved = True
    while improved:
        improved = False
        for u in range(graph.n):
            row = graph.adj[u]
            same = row & (side if side >> u & 1 else ~side)
            if 2 * same.bit_count() > row.bit_count():
                side ^= 1 << u
                improved = True
    left = side
    right = ((1 << graph.n) - 1) ^ side
    return Graph(
        graph.n,
        tuple(row & (right if left >> u & 1 else left) for u, row in enumerate(graph.adj)),
    )


def graph_to_json(graph: Graph) -> dict:
    return GraphSchema(n=graph.n, edges=graph.edges()).model_dump()


def graph_from_json(data: dict) -> Graph:
    parsed = GraphSchema.model_validate(data)
    return Graph.from_edges(parsed.n, parsed.edges)


def graph_to_text(graph: Graph) -> str:
    """First token the vertex count, then one ``u v`` pair per line."""
    return "\n".join([str(graph.n)] + [f"{u} {v}" for u, v in graph.edges()]) + "\n"


def graph_from_text(text: str) -> Graph:
    tokens = text.split()
    if not tokens or (len(tokens) - 1) % 2:
        raise ValueError("expected a vertex count followed by vertex pairs")
    values = [int(t) for t in tokens]
    return Graph.from_edges(values[0], zip(values[1::2], values[2::2]))

"""
Uniform covers of the triangle-free graphs: families of graphs on [n],
each missing the same number m of edges, such that every triangle-free
graph on [n] lies inside one of them. f(m, n) is the least size of such a
family.
"""

import logging
import math
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from threshold_lab.core.config import settings
from threshold_lab.core.exceptions import GroundSetTooLarge, TooLarge
from threshold_lab.core.family import sample_mask
from threshold_lab.core.graphs import ENUMERATION_LIMIT, enumerate_maximal_triangle_free, maximal_triangle_free
from threshold_lab.core.seeding import SeedLike, as_generator, parallel_map, run_trials
from threshold_lab.core.stats import half_width, log_binomial, proportion
from threshold_lab.model.cover import CoverFamily
from threshold_lab.model.graph import Graph, pair_count
from threshold_lab.model.ground_set import iter_bits
from threshold_lab.schemas.reports import BipartiteReport, Quantity

logger = logging.getLogger(__name__)

ALPHA_LIMIT = 40
# Host edges whose choices split the exhaustive search into parts
PREFIX_EDGES = 3


def ramsey_clique_cover(n: int, k: int) -> CoverFamily:
    """K_n minus the edges inside B, for every k-subset B of [n]."""
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k = {k}, n = {n}")
    complete = Graph.complete(n)
    members = []
    for block in combinations(range(n), k):
        members.append(complete.difference(Graph.complete_on(n, block)))
    return CoverFamily(n=n, m=k * (k - 1) // 2, members=tuple(members))


def _uncovered_in_part(cover: CoverFamily, prefix: Tuple[int, int]) -> Optional[Graph]:
    masks = [member.to_edge_set().bits for member in cover.members]
    for graph in enumerate_maximal_triangle_free(Graph.complete(cover.n), prefix=prefix):
        bits = graph.to_edge_set().bits
        if not any(bits & ~mask == 0 for mask in masks):
            return graph
    return None


def find_uncovered(cover: CoverFamily, threads: Optional[int] = None) -> Optional[Graph]:
    """
    A triangle-free graph on [n] inside no member, or None. Every
    triangle-free graph lies in a maximal one, so only maximal triangle-free
    graphs of K_n are checked, split by the choices on the first host edges.
    """
    if cover.n > ENUMERATION_LIMIT:
        raise GroundSetTooLarge(cover.n, ENUMERATION_LIMIT, what="vertex count")
    length = min(PREFIX_EDGES, pair_count(cover.n))
    parts = [(bits, length) for bits in range(1 << length)]
    found = parallel_map(lambda prefix: _uncovered_in_part(cover, prefix), parts, threads=threads)
    return next((graph for graph in found if graph is not None), None)


def cover_validity_exhaustive(cover: CoverFamily, threads: Optional[int] = None) -> bool:
    return find_uncovered(cover, threads=threads) is None


def _clique_cover_bound(candidates: int, adj: Tuple[int, ...]) -> int:
    """Size of a greedy partition of ``candidates`` into cliques; bounds alpha from above."""
    count = 0
    rest = candidates
    while rest:
        v = (rest & -rest).bit_length() - 1
        clique = 1 << v
        common = rest & adj[v]
        while common:
            u = (common & -common).bit_length() - 1
            clique |= 1 << u
            common &= adj[u]
        rest &= ~clique
        count += 1
    return count


def independence_number(graph: Graph) -> int:
    """
    Maximum independent set size by branch and bound. Vertices of degree at
    most 1 are taken greedily; branches are cut with a greedy clique cover.
    """
    if graph.n > ALPHA_LIMIT:
        raise TooLarge(graph.n, ALPHA_LIMIT, what="vertex count")
    adj = graph.adj
    best = 0

    def search(candidates: int, size: int) -> None:
        nonlocal best
        reduced = True
        while candidates and reduced:
            reduced = False
            for v in iter_bits(candidates):
                if (adj[v] & candidates).bit_count() <= 1:
                    size += 1
                    candidates &= ~(adj[v] | 1 << v)
                    reduced = True
                    break
        if not candidates:
            best = max(best, size)
            return
        if size + _clique_cover_bound(candidates, adj) <= best:
            return
        v = max(iter_bits(candidates), key=lambda u: (adj[u] & candidates).bit_count())
        search(candidates & ~(adj[v] | 1 << v), size + 1)
        search(candidates & ~(1 << v), size)

    search((1 << graph.n) - 1, 0)
    return best


def _small_alpha_in_part(n: int, k: int, prefix: Tuple[int, int]) -> Optional[Graph]:
    for graph in enumerate_maximal_triangle_free(Graph.complete(n), prefix=prefix):
        if independence_number(graph) < k:
            return graph
    return None


def find_small_alpha(
    n: int,
    k: int,
    mode: str = "exhaustive",
    trials: int = 10_000,
    seed: SeedLike = 0,
    threads: Optional[int] = None,
) -> Tuple[Optional[Graph], int]:
    """
    A triangle-free graph on [n] with independence number below k, and the
    number of graphs examined (0 for the exhaustive search).
    """
    if mode == "exhaustive":
        if n > ENUMERATION_LIMIT:
            raise GroundSetTooLarge(n, ENUMERATION_LIMIT, what="vertex count")
        length = min(PREFIX_EDGES, pair_count(n))
        parts = [(bits, length) for bits in range(1 << length)]
        found = parallel_map(lambda prefix: _small_alpha_in_part(n, k, prefix), parts, threads=threads)
        return next((graph for graph in found if graph is not None), None), 0
    if mode == "sampled":
        rng = as_generator(seed)
        complete = Graph.complete(n)
        for examined in range(1, trials + 1):
            graph = maximal_triangle_free(complete, rng)
            if independence_number(graph) < k:
                return graph, examined
        return None, trials
    raise ValueError(f"unknown mode {mode!r}")


def clique_cover_validity_via_alpha(
    n: int,
    k: int,
    mode: str = "exhaustive",
    trials: int = 10_000,
    seed: SeedLike = 0,
) -> Optional[bool]:
    """
    The k-clique cover of K_n is valid iff every triangle-free graph on [n]
    has an independent set of size k. The sampled mode returns None when no
    counterexample turns up within ``trials``.
    """
    witness, _ = find_small_alpha(n, k, mode=mode, trials=trials, seed=seed)
    if witness is not None:
        return False
    return True if mode == "exhaustive" else None


def q_upper_bound(m: int, n: int, cover_size: int) -> float:
    """log(2 f) / m for a cover of size f with m common non-edges."""
    if m < 1 or cover_size < 1:
        raise ValueError("need m >= 1 and cover_size >= 1")
    return math.log(2 * cover_size) / m


def ramsey_cover_log_size(m: int, n: int) -> dict:
    """
    Cover by cliques of size k = ceil(2 sqrt m): its log size log C(n, k)
    and the shape bound k log n.
    """
    k = math.ceil(2 * math.sqrt(m))
    return {"k": k, "log_size": log_binomial(n, k), "shape_bound": k * math.log(n)}


def container_bound_log(n: int, constant: float = 1.0) -> float:
    """C n^(3/2) log n, the log of the container bound; a formula only."""
    return constant * n ** 1.5 * math.log(n)


def spanning_forest(graph: Graph) -> Graph:
    """Depth-first spanning forest, each tree rooted at its least vertex."""
    seen = 0
    edges: List[Tuple[int, int]] = []
    for root in range(graph.n):
        if seen >> root & 1:
            continue
        seen |= 1 << root
        stack = [root]
        while stack:
            u = stack[-1]
            fresh = graph.adj[u] & ~seen
            if not fresh:
                stack.pop()
                continue
            v = (fresh & -fresh).bit_length() - 1
            seen |= 1 << v
            edges.append((u, v))
            stack.append(v)
    return Graph.from_edges(graph.n, edges)


def forest_union_bound(cover: CoverFamily) -> float:
    """sum_H 2^(-e(T_H)) over members, T_H a spanning forest of the complement; at least 1 for a valid cover."""
    return math.fsum(2.0 ** -spanning_forest(h.complement()).edge_count for h in cover.members)


def bipartite_lower_bound_experiment(
    h: Graph, trials: int, seed: int, threads: Optional[int] = None
) -> BipartiteReport:
    """
    P(G ⊆ H) for a random complete bipartite G (each vertex on a side with
    probability 1/2) against 2^(-e(T)), T a spanning forest of the complement
    of H. G ⊆ H exactly when every component of the complement is on one
    side, so the bound is attained: P = 2^(-(n - components)) = 2^(-e(T)).
    """
    missing = h.complement()
    forest = spanning_forest(missing)
    missing_edges = missing.edges()
    bound = 2.0 ** -forest.edge_count

    def trial(index: int, rng: np.random.Generator) -> dict:
        side = sample_mask(h.n, 0.5, rng)
        inside = all((side >> u & 1) == (side >> v & 1) for u, v in missing_edges)
        return {"trial": index, "side": side, "contained": int(inside)}

    records = run_trials(trial, trials, seed, threads=threads)
    estimate, error = proportion(sum(r["contained"] for r in records), trials)
    passed = estimate <= bound + settings.ASSERT_SIGMAS * error
    if not passed:
        logger.error(f"P(G in H) estimate {estimate:.5f} exceeds 2^-e(T) = {bound:.5f}")
    return BipartiteReport(
        trials=trials,
        forest_edges=forest.edge_count,
        bound=Quantity.formula(bound),
        estimate=Quantity.monte_carlo(estimate, half_width(error)),
        exact=Quantity.exact(bound),
        passed=passed,
        records=records,
    )

"""
Turns validated specs into domain objects.
"""

import logging
from typing import List

import numpy as np

from threshold_lab.core.exceptions import ConfigInvalid
from threshold_lab.core.family import check_monotone, triangle_free_family
from threshold_lab.core.random_models import sample_gnp
from threshold_lab.core.seeding import as_generator
from threshold_lab.model import (
    CoverFamily,
    Direction,
    Graph,
    GroundSet,
    MonotoneFamily,
    WeightedFamily,
    down_closure,
    up_closure,
)
from threshold_lab.schemas.family import FamilySpec
from threshold_lab.schemas.graph import CoverSchema
from threshold_lab.schemas.params import GraphSpec, WeightedGraphSpec

logger = logging.getLogger(__name__)


def build_family(spec: FamilySpec, seed: int = 0) -> MonotoneFamily:
    if spec.kind == "builtin":
        if spec.name == "clique-free-r":
            raise ConfigInvalid("the clique-free-r family is reserved and not available", path="family.name")
        return triangle_free_family(spec.n)
    ground = GroundSet(spec.ground_size)
    direction = Direction(spec.direction)
    if spec.kind == "explicit":
        members = [ground.from_bitstring(text).bits for text in spec.members]
        family = MonotoneFamily.from_members(ground, direction, members, label="explicit")
        check_monotone(family, seed=seed)
    else:
        generators = [ground.from_bitstring(text).bits for text in spec.generators]
        closure = up_closure if direction is Direction.UP else down_closure
        family = closure(ground, generators, label=f"{direction.value}-closure")
    logger.debug(f"Built {family.label} family over {ground.size} elements")
    return family


def _random_bipartite(n: int, edges: int, seed: int) -> Graph:
    """``edges`` distinct pairs across the halves [0, n/2) and [n/2, n)."""
    half = n // 2
    cross = [(u, v) for u in range(half) for v in range(half, n)]
    if edges > len(cross):
        raise ConfigInvalid(f"{edges} edges do not fit between sides of sizes {half} and {n - half}")
    chosen = as_generator(seed).choice(len(cross), size=edges, replace=False)
    return Graph.from_edges(n, [cross[i] for i in np.sort(chosen)])


def build_graph(spec: GraphSpec) -> Graph:
    n, size = spec.n, spec.size
    try:
        if spec.kind == "explicit":
            return Graph.from_edges(n, spec.edges)
        if spec.kind == "empty":
            return Graph.empty(n)
        if spec.kind == "complete":
            return Graph.complete(n)
        if spec.kind == "clique":
            return Graph.complete_on(n, range(size))
        if spec.kind == "path":
            length = n if size is None else size
            return Graph.from_edges(n, [(i, i + 1) for i in range(length - 1)])
        if spec.kind == "cycle":
            if not 3 <= size <= n:
                raise ValueError(f"cycle length {size} outside [3, {n}]")
            return Graph.from_edges(n, [(i, (i + 1) % size) for i in range(size)])
        if spec.kind == "star":
            return Graph.star(n, size)
        if spec.kind == "matching":
            return Graph.matching(n, size)
        if spec.kind == "petersen":
            graph = Graph.petersen()
        elif spec.kind == "wagner":
            graph = Graph.wagner()
        elif spec.kind == "random-bipartite":
            return _random_bipartite(n, size, spec.seed)
        else:
            return sample_gnp(n, spec.p, spec.seed)
    except ValueError as e:
        raise ConfigInvalid(str(e))
    if graph.n != n:
        raise ConfigInvalid(f"the {spec.kind} graph has {graph.n} vertices, not {n}")
    return graph


def build_graphs(specs: List[GraphSpec]) -> List[Graph]:
    return [build_graph(spec) for spec in specs]


def build_weighted(specs: List[WeightedGraphSpec]) -> WeightedFamily:
    try:
        return WeightedFamily(tuple((build_graph(s.graph), s.weight) for s in specs))
    except ValueError as e:
        raise ConfigInvalid(str(e))


def build_cover(schema: CoverSchema) -> CoverFamily:
    try:
        members = tuple(Graph.from_edges(schema.n, edges) for edges in schema.members)
        return CoverFamily(n=schema.n, m=schema.m, members=members, relaxed=schema.relaxed)
    except ValueError as e:
        raise ConfigInvalid(str(e), path="cover")

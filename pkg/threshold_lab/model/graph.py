from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, List, Tuple

from threshold_lab.model.ground_set import GroundSet, iter_bits


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(u: int, v: int, n: int) -> int:
    """Row-major position of edge {u, v} in the upper triangle of K_n."""
    if u > v:
        u, v = v, u
    if u == v or not 0 <= u < n or not v < n:
        raise ValueError(f"({u}, {v}) is not an edge of K_{n}")
    return u * n - u * (u + 1) // 2 + (v - u - 1)


@lru_cache(maxsize=64)
def edge_pairs(n: int) -> Tuple[Tuple[int, int], ...]:
    """Inverse of ``edge_index``: position -> (u, v)."""
    return tuple((u, v) for u in range(n) for v in range(u + 1, n))


@dataclass(frozen=True)
class EdgeSet:
    """A subset of E(K_n) as a mask under the canonical edge index."""

    n: int
    bits: int

    @property
    def ground(self) -> GroundSet:
        return GroundSet(max(pair_count(self.n), 1), label=f"E(K_{self.n})")

    def __len__(self) -> int:
        return self.bits.bit_count()

    def edges(self) -> List[Tuple[int, int]]:
        pairs = edge_pairs(self.n)
        return [pairs[i] for i in iter_bits(self.bits)]

    def to_graph(self) -> "Graph":
        return Graph.from_edges(self.n, self.edges())


@dataclass(frozen=True)
class Graph:
    n: int
    adj: Tuple[int, ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValueError(f"expected {self.n} adjacency rows, got {len(self.adj)}")
        for u, row in enumerate(self.adj):
            if row >> u & 1:
                raise ValueError(f"self-loop at {u}")
            if row >> self.n:
                raise ValueError(f"row {u} has neighbours outside vertex set of size {self.n}")
            for v in iter_bits(row):
                if not self.adj[v] >> u & 1:
                    raise ValueError(f"adjacency is not symmetric: {u} -> {v} without {v} -> {u}")

    # -- construction -------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside vertex set of size {n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def from_edge_set(cls, edge_set: EdgeSet) -> "Graph":
        return edge_set.to_graph()

    @classmethod
    def from_edge_mask(cls, n: int, bits: int) -> "Graph":
        return EdgeSet(n, bits).to_graph()

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << u) for u in range(n)))

    @classmethod
    def complete_on(cls, n: int, vertices) -> "Graph":
        """Clique on the given vertices, isolated elsewhere."""
        vertices = list(vertices)
        return cls.from_edges(n, [(u, v) for i, u in enumerate(vertices) for v in vertices[i + 1 :]])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def star(cls, n: int, leaves: int, centre: int = 0) -> "Graph":
        others = [v for v in range(n) if v != centre][:leaves]
        if len(others) < leaves:
            raise ValueError(f"a star with {leaves} leaves needs {leaves + 1} vertices")
        return cls.from_edges(n, [(centre, v) for v in others])

    @classmethod
    def matching(cls, n: int, size: int) -> "Graph":
        if 2 * size > n:
            raise ValueError(f"a matching of size {size} needs {2 * size} vertices")
        return cls.from_edges(n, [(2 * i, 2 * i + 1) for i in range(size)])

    @classmethod
    def petersen(cls) -> "Graph":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return cls.from_edges(10, outer + spokes + inner)

    @classmethod
    def wagner(cls) -> "Graph":
        """The Moebius ladder on 8 vertices: triangle-free with independence number 3."""
        return cls.from_edges(8, [(i, (i + 1) % 8) for i in range(8)] + [(i, i + 4) for i in range(4)])

    # -- queries ------------------------------------------------------

    @cached_property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, u: int) -> int:
        return self.adj[u].bit_count()

    @property
    def max_degree(self) -> int:
        return max((row.bit_count() for row in self.adj), default=0)

    def induced_edge_count(self, vertices: int) -> int:
        return sum((self.adj[u] & vertices).bit_count() for u in iter_bits(vertices)) // 2

    def is_subgraph_of(self, other: "Graph") -> bool:
        self._same_order(other)
        return all(a & ~b == 0 for a, b in zip(self.adj, other.adj))

    def intersects(self, other: "Graph") -> bool:
        self._same_order(other)
        return any(a & b for a, b in zip(self.adj, other.adj))

    # -- edge-set algebra ---------------------------------------------

    def union(self, other: "Graph") -> "Graph":
        self._same_order(other)
        return Graph(self.n, tuple(a | b for a, b in zip(self.adj, other.adj)))

    def intersection(self, other: "Graph") -> "Graph":
        self._same_order(other)
        return Graph(self.n, tuple(a & b for a, b in zip(self.adj, other.adj)))

    def difference(self, other: "Graph") -> "Graph":
        self._same_order(other)
        return Graph(self.n, tuple(a & ~b for a, b in zip(self.adj, other.adj)))

    def complement(self) -> "Graph":
        return Graph.complete(self.n).difference(self)

    def add_edge(self, u: int, v: int) -> "Graph":
        adj = list(self.adj)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        return Graph(self.n, tuple(adj))

    def to_edge_set(self) -> EdgeSet:
        n = self.n
        bits = 0
        for u, v in self.edges():
            bits |= 1 << (u * n - u * (u + 1) // 2 + (v - u - 1))
        return EdgeSet(n, bits)

    def _same_order(self, other: "Graph") -> None:
        if other.n != self.n:
            raise ValueError(f"graphs on {self.n} and {other.n} vertices")

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Tuple

from threshold_lab.model.graph import Graph
from threshold_lab.model.ground_set import iter_bits


@dataclass(frozen=True)
class Digraph:
    """
    Out-adjacency bitsets. Antiparallel arcs may coexist; self-loops only
    when ``loops_allowed`` is set.
    """

    n: int
    out: Tuple[int, ...]
    loops_allowed: bool = False

    def __post_init__(self):
        if len(self.out) != self.n:
            raise ValueError(f"expected {self.n} out-adjacency rows, got {len(self.out)}")
        if not self.loops_allowed:
            for v, row in enumerate(self.out):
                if row >> v & 1:
                    raise ValueError(f"self-loop at {v} in a loopless digraph")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Tuple[int, int]], loops_allowed: bool = False) -> "Digraph":
        out = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) outside vertex set of size {n}")
            out[u] |= 1 << v
        return cls(n, tuple(out), loops_allowed)

    @classmethod
    def empty(cls, n: int, loops_allowed: bool = False) -> "Digraph":
        return cls(n, (0,) * n, loops_allowed)

    def arcs(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.out[u])]

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    @cached_property
    def arc_count(self) -> int:
        return sum(row.bit_count() for row in self.out)

    @property
    def max_out_degree(self) -> int:
        return max((row.bit_count() for row in self.out), default=0)

    def undirected(self) -> Graph:
        """Forgets orientation; loops are dropped."""
        adj = [0] * self.n
        for u, row in enumerate(self.out):
            row &= ~(1 << u)
            adj[u] |= row
            for v in iter_bits(row):
                adj[v] |= 1 << u
        return Graph(self.n, tuple(adj))


@dataclass(frozen=True)
class CoupledSample:
    gamma: Graph
    d: Digraph
    p: float
    p_prime: float

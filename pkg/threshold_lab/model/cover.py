from dataclasses import dataclass
from typing import Tuple

from threshold_lab.model.graph import Graph, pair_count


def max_common_nonedges(n: int) -> int:
    """C(n,2) - floor(n^2/4): a cover member must still hold a complete bipartite graph."""
    return pair_count(n) - n * n // 4


@dataclass(frozen=True)
class CoverFamily:
    """
    Graphs on [n] sharing the non-edge count m. In relaxed mode a member only
    needs at least C(n,2) - m edges.
    """

    n: int
    m: int
    members: Tuple[Graph, ...]
    relaxed: bool = False

    def __post_init__(self):
        if self.m < 0 or self.m > pair_count(self.n):
            raise ValueError(f"m = {self.m} outside [0, {pair_count(self.n)}]")
        target = pair_count(self.n) - self.m
        for i, member in enumerate(self.members):
            if member.n != self.n:
                raise ValueError(f"member {i} has {member.n} vertices, expected {self.n}")
            if self.relaxed and member.edge_count < target:
                raise ValueError(f"member {i} has {member.edge_count} < {target} edges")
            if not self.relaxed and member.edge_count != target:
                raise ValueError(f"member {i} has {member.edge_count} != {target} edges")

    @property
    def in_range(self) -> bool:
        """Whether m lies in the range where covers of every triangle-free graph can exist."""
        return self.m <= max_common_nonedges(self.n)

    @property
    def mode(self) -> str:
        return "relaxed (at least C(n,2) - m edges, non-standard)" if self.relaxed else "exact"

    def __len__(self) -> int:
        return len(self.members)

from dataclasses import dataclass
from typing import Iterable, Tuple

from threshold_lab.model.graph import Graph


@dataclass(frozen=True)
class WeightedFamily:
    members: Tuple[Tuple[Graph, float], ...]

    def __post_init__(self):
        members = tuple((graph, float(weight)) for graph, weight in self.members)
        orders = {graph.n for graph, _ in members}
        if len(orders) > 1:
            raise ValueError(f"members on differing vertex counts {sorted(orders)}")
        for graph, weight in members:
            if weight < 0:
                raise ValueError(f"negative weight {weight}")
        object.__setattr__(self, "members", members)

    @classmethod
    def uniform(cls, graphs: Iterable[Graph], weight: float = 1.0) -> "WeightedFamily":
        return cls(tuple((graph, weight) for graph in graphs))

    @property
    def n(self) -> int:
        return self.members[0][0].n if self.members else 0

    @property
    def graphs(self) -> Tuple[Graph, ...]:
        return tuple(graph for graph, _ in self.members)

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class FamilyClass:
    """Members sharing an edge count and a weight; the class size is given by its natural log."""

    log_multiplicity: float
    edges: int
    weight: float = 1.0

    def __post_init__(self):
        if self.edges < 0 or self.weight < 0:
            raise ValueError("edges and weight must be nonnegative")

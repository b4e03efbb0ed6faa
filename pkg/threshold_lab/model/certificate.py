from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Tuple

from threshold_lab.model.family import Direction
from threshold_lab.model.ground_set import GroundSet


@dataclass(frozen=True)
class Certificate:
    """A finite collection of subsets of X, kept sorted and duplicate-free."""

    ground: GroundSet
    members: Tuple[int, ...] = ()

    def __post_init__(self):
        masks = tuple(sorted(set(self.members)))
        for bits in masks:
            if bits < 0 or bits >> self.ground.size:
                raise ValueError(f"certificate member {bits:#x} lies outside the ground set")
        object.__setattr__(self, "members", masks)

    @classmethod
    def of(cls, ground: GroundSet, members: Iterable[int]) -> "Certificate":
        return cls(ground, tuple(members))

    def __len__(self) -> int:
        return len(self.members)

    def bitstrings(self) -> list:
        return [self.ground.to_bitstring(bits) for bits in self.members]


@dataclass(frozen=True)
class FractionalCertificate:
    """Nonnegative weights g(T); zero entries are dropped."""

    ground: GroundSet
    weights: Tuple[Tuple[int, float], ...] = ()

    def __post_init__(self):
        merged: Dict[int, float] = {}
        for bits, weight in self.weights:
            if weight < 0:
                raise ValueError(f"negative weight {weight} on {bits:#x}")
            if bits < 0 or bits >> self.ground.size:
                raise ValueError(f"weighted set {bits:#x} lies outside the ground set")
            merged[bits] = merged.get(bits, 0.0) + float(weight)
        object.__setattr__(
            self, "weights", tuple(sorted((b, w) for b, w in merged.items() if w > 0))
        )

    @classmethod
    def from_mapping(cls, ground: GroundSet, weights: Mapping[int, float]) -> "FractionalCertificate":
        return cls(ground, tuple(weights.items()))

    @classmethod
    def from_certificate(cls, cert: Certificate) -> "FractionalCertificate":
        return cls(cert.ground, tuple((bits, 1.0) for bits in cert.members))

    def as_dict(self) -> Dict[int, float]:
        return dict(self.weights)

    def coverage(self, bits: int, direction) -> float:
        """Total weight on sets that contain (down) or are contained in (up) ``bits``."""
        if Direction(direction) is Direction.DOWN:
            return sum(w for t, w in self.weights if bits & ~t == 0)
        return sum(w for t, w in self.weights if t & ~bits == 0)

    def bitstring_weights(self) -> Dict[str, float]:
        return {self.ground.to_bitstring(bits): w for bits, w in self.weights}

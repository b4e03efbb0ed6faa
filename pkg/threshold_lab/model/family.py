from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Iterator, Optional, Tuple

from threshold_lab.core.exceptions import GroundSetTooLarge
from threshold_lab.model.ground_set import EXACT_LIMIT, GroundSet, iter_bits


class Direction(str, Enum):
    UP = "up"
    DOWN = "down"

    @property
    def opposite(self) -> "Direction":
        return Direction.DOWN if self is Direction.UP else Direction.UP


@dataclass(frozen=True)
class MonotoneFamily:
    """
    A monotone family over 2^X, given by a membership predicate on raw masks
    and, for small ground sets, optionally by its sorted member list.
    """

    ground: GroundSet
    direction: Direction
    member: Callable[[int], bool] = field(compare=False)
    enumeration: Optional[Tuple[int, ...]] = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        if self.enumeration is not None:
            object.__setattr__(self, "enumeration", tuple(sorted(set(self.enumeration))))

    @classmethod
    def from_members(
        cls, ground: GroundSet, direction: Direction, members: Iterable[int], label: str = ""
    ) -> "MonotoneFamily":
        masks = tuple(sorted(set(members)))
        for bits in masks:
            if bits < 0 or bits >> ground.size:
                raise ValueError(f"member {bits:#x} lies outside the ground set")
        lookup = frozenset(masks)
        return cls(ground, direction, lookup.__contains__, masks, label)

    def __contains__(self, bits: int) -> bool:
        return bool(self.member(bits))

    def members(self) -> Iterator[int]:
        if self.enumeration is not None:
            return iter(self.enumeration)
        if self.ground.size > EXACT_LIMIT:
            raise GroundSetTooLarge(self.ground.size, EXACT_LIMIT)
        return (bits for bits in range(1 << self.ground.size) if self.member(bits))

    @cached_property
    def member_list(self) -> Tuple[int, ...]:
        return tuple(self.members())

    @cached_property
    def size_counts(self) -> Tuple[int, ...]:
        """Number of members of each cardinality 0..N."""
        counts = [0] * (self.ground.size + 1)
        for bits in self.member_list:
            counts[bits.bit_count()] += 1
        return tuple(counts)

    @property
    def is_empty(self) -> bool:
        if self.direction is Direction.DOWN:
            return not self.member(0)
        return not self.member(self.ground.full)

    @property
    def is_everything(self) -> bool:
        if self.direction is Direction.DOWN:
            return bool(self.member(self.ground.full))
        return bool(self.member(0))

    @property
    def is_trivial(self) -> bool:
        return self.is_empty or self.is_everything

    def bitstrings(self) -> list:
        return [self.ground.to_bitstring(bits) for bits in self.member_list]


def down_closure(ground: GroundSet, generators: Iterable[int], label: str = "") -> MonotoneFamily:
    generators = tuple(generators)
    members = set()
    for top in generators:
        # every submask of top
        sub = top
        while True:
            members.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & top
    return MonotoneFamily.from_members(ground, Direction.DOWN, members, label)


def up_closure(ground: GroundSet, generators: Iterable[int], label: str = "") -> MonotoneFamily:
    full = ground.full
    complements = [full ^ g for g in generators]
    lowered = down_closure(ground, complements)
    return MonotoneFamily.from_members(
        ground, Direction.UP, (full ^ bits for bits in lowered.member_list), label
    )


def minimal_elements(family: MonotoneFamily) -> list:
    """The antichain generating ``family``: maximal members of a down-set,
    minimal members of an up-set."""
    members = set(family.member_list)
    result = []
    for bits in sorted(members):
        if family.direction is Direction.DOWN:
            extendable = any(
                (bits | (1 << i)) in members
                for i in range(family.ground.size)
                if not bits >> i & 1
            )
        else:
            extendable = any(bits ^ (1 << i) in members for i in iter_bits(bits))
        if not extendable:
            result.append(bits)
    return result

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

# Exact enumeration over 2^X is refused beyond this many base elements
EXACT_LIMIT = 24


def iter_bits(bits: int) -> Iterator[int]:
    """Yields the positions of the set bits, lowest first."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class GroundSet:
    size: int
    label: Optional[str] = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("a ground set needs at least one element")

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def mask(self, bits: int) -> "SubsetMask":
        return SubsetMask(bits, self)

    def from_elements(self, elements: Iterable[int]) -> "SubsetMask":
        bits = 0
        for element in elements:
            if not 0 <= element < self.size:
                raise ValueError(f"element {element} outside ground set of size {self.size}")
            bits |= 1 << element
        return SubsetMask(bits, self)

    def from_bitstring(self, text: str) -> "SubsetMask":
        """Character i of ``text`` is element i."""
        if len(text) != self.size or set(text) - {"0", "1"}:
            raise ValueError(f"expected a bit-string of length {self.size}, got {text!r}")
        return SubsetMask(sum(1 << i for i, c in enumerate(text) if c == "1"), self)

    def to_bitstring(self, bits: int) -> str:
        return "".join("1" if bits >> i & 1 else "0" for i in range(self.size))


@dataclass(frozen=True)
class SubsetMask:
    bits: int
    ground: GroundSet

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.ground.size:
            raise ValueError(f"mask {self.bits:#x} has bits outside the low {self.ground.size}")

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def complement(self) -> "SubsetMask":
        return SubsetMask(self.ground.full ^ self.bits, self.ground)

    def issubset(self, other: "SubsetMask") -> bool:
        return self.bits & ~other.bits == 0

    def elements(self) -> list:
        return list(iter_bits(self.bits))

    def to_bitstring(self) -> str:
        return self.ground.to_bitstring(self.bits)

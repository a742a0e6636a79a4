"""Power-set lattice over a finite attribute set.

Subsets are bitmasks over attributes 1..L. Stage indices are 1-based and
follow the canonical ordering: cardinality ascending, ties broken by
ascending mask value, so position 1 is the empty set and position 2^L is
the full set.
"""

from __future__ import annotations

from dataclasses import dataclass

MAX_ATTRIBUTES = 20


def is_subset(a: int, b: int) -> bool:
    """True iff bitmask a is a subset of bitmask b."""
    return a & ~b == 0


def members(mask: int) -> frozenset[int]:
    """1-based attribute indices present in a bitmask."""
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def mask_from_members(attrs, n_attributes: int) -> int:
    """Bitmask for a collection of 1-based attribute indices."""
    mask = 0
    for a in attrs:
        if not 1 <= a <= n_attributes:
            raise ValueError(f"attribute {a} outside 1..{n_attributes}")
        mask |= 1 << (a - 1)
    return mask


@dataclass(frozen=True)
class AttributeLattice:
    """Canonically ordered power set of {1..n_attributes}."""

    n_attributes: int
    order: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.order)

    def subset(self, i: int) -> int:
        """Bitmask of the subset at 1-based stage index i."""
        if not 1 <= i <= self.size:
            raise IndexError(f"stage index {i} outside 1..{self.size}")
        return self.order[i - 1]

    def cardinality(self, i: int) -> int:
        return self.subset(i).bit_count()

    def sub_support(self, i: int) -> list[int]:
        """Stage indices j < i whose subsets are strict subsets of subset i.

        By the cardinality ordering this is exactly the set of strict
        subsets of subset i, in ascending index order.
        """
        target = self.subset(i)
        return [j for j in range(1, i) if is_subset(self.order[j - 1], target)]

    def levels(self) -> list[list[int]]:
        """Stage indices grouped by subset cardinality, ascending."""
        out: list[list[int]] = [[] for _ in range(self.n_attributes + 1)]
        for i in range(1, self.size + 1):
            out[self.cardinality(i)].append(i)
        return out


def enumerate_subsets(n_attributes: int) -> AttributeLattice:
    """Enumerate all 2^L attribute subsets in canonical order."""
    if not 0 <= n_attributes <= MAX_ATTRIBUTES:
        raise ValueError(
            f"attribute count must be in 0..{MAX_ATTRIBUTES}, got {n_attributes}"
        )
    order = sorted(range(1 << n_attributes), key=lambda m: (m.bit_count(), m))
    return AttributeLattice(n_attributes=n_attributes, order=tuple(order))

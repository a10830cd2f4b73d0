from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import repeat
from math import factorial, prod
from typing import Iterable, Iterator

from sympy.utilities.iterables import multiset_permutations, partitions

from dunkl_intertwining.exceptions import (
    ModulusMismatchException,
    PartitionException,
    PartitionTooLongException,
)
from dunkl_intertwining.typing import Parts


@dataclass(frozen=True)
class Partition:
    """An integer partition stored without trailing zeros.

    Equality and hashing are structural, so partitions can key coefficient maps.
    """

    parts: Parts = ()

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p < 1 for p in parts):
            raise PartitionException(parts, "parts must be positive")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise PartitionException(parts, "parts must be weakly decreasing")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> Partition:
        return cls(tuple(parts))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, index: int) -> int:
        """Part tau_{index+1}; implicit zeros past the length."""
        return self.parts[index] if index < len(self.parts) else 0

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"

    @property
    def modulus(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @cached_property
    def conjugate(self) -> Partition:
        return conjugate(self)

    def cells(self) -> Iterator[tuple[int, int]]:
        """Young diagram cells (i, j), 1-based, row by row."""
        for i, part in enumerate(self.parts, start=1):
            for j in range(1, part + 1):
                yield i, j

    def padded(self, n_vars: int) -> Parts:
        if len(self.parts) > n_vars:
            raise PartitionTooLongException(len(self.parts), n_vars)
        return self.parts + (0,) * (n_vars - len(self.parts))


class DominanceResult(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


def parse_partition(text: str) -> Partition:
    """Parse "2,1" or "2 1"; the empty string and "0" give the empty partition."""
    tokens = [tok for tok in text.replace(",", " ").split() if tok]
    try:
        return Partition(tuple(int(tok) for tok in tokens))
    except ValueError as exc:
        raise PartitionException(tuple(tokens), "not a list of integers") from exc


def enumerate_partitions(n: int, max_len: int) -> list[Partition]:
    """All partitions of n with at most max_len parts, in reverse-lexicographic order.

    Args:
        n (int): The modulus, n >= 0.
        max_len (int): The maximal number of parts, max_len >= 1.

    Returns:
        list[Partition]: e.g. (4, 2) gives [(4), (3,1), (2,2)].
    """
    if n < 0 or max_len < 1:
        raise PartitionException((n, max_len), "need n >= 0 and max_len >= 1")
    found = [_from_multiplicities(counts) for counts in partitions(n, m=max_len)]
    return [Partition(parts) for parts in sorted(found, reverse=True)]


def _from_multiplicities(counts: dict[int, int]) -> Parts:
    return tuple(sorted((part for size, count in counts.items() for part in repeat(size, count)), reverse=True))


def conjugate(tau: Partition) -> Partition:
    if not tau.parts:
        return Partition()
    return Partition(tuple(sum(1 for p in tau.parts if p >= j) for j in range(1, tau.parts[0] + 1)))


def _prefix_sums(tau: Partition, length: int) -> list[int]:
    sums, total = [], 0
    for i in range(length):
        total += tau[i]
        sums.append(total)
    return sums


def dominance_compare(lam: Partition, mu: Partition) -> DominanceResult:
    """Compare two partitions of equal modulus in the dominance order."""
    if lam.modulus != mu.modulus:
        raise ModulusMismatchException(lam.modulus, mu.modulus)
    if lam == mu:
        return DominanceResult.EQUAL

    length = max(lam.length, mu.length)
    pairs = list(zip(_prefix_sums(lam, length), _prefix_sums(mu, length)))
    if all(a <= b for a, b in pairs):
        return DominanceResult.LESS
    if all(a >= b for a, b in pairs):
        return DominanceResult.GREATER
    return DominanceResult.INCOMPARABLE


def dominated_by(lam: Partition, tau: Partition) -> bool:
    """lam <= tau in dominance order (same modulus assumed)."""
    return dominance_compare(lam, tau) in (DominanceResult.LESS, DominanceResult.EQUAL)


def multiplicity_count(mu: Partition, n_vars: int) -> int:
    """M(mu, N): the number of distinct permutations of mu padded with zeros to length N."""
    counts = Counter(mu.padded(n_vars))
    return factorial(n_vars) // prod(factorial(c) for c in counts.values())


def partition_factorial(tau: Partition) -> int:
    return prod(factorial(p) for p in tau.parts)


def distinct_permutations(parts: Iterable[int]) -> Iterator[Parts]:
    """Distinct orderings of a multiset, in lexicographic order."""
    for perm in multiset_permutations(list(parts)):
        yield tuple(perm)

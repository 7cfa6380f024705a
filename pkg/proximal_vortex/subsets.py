"""
Subsets of a finite ground set ``{0, ..., n-1}`` as integer bitmasks.

Bit ``i`` of a SubsetId is set iff point ``i`` is a member.
"""
from typing import Iterable, Iterator, List, Sequence

import numpy as np

from .errors import MalformedSubsetError

SubsetId = int

EMPTY: SubsetId = 0


def full(n: int) -> SubsetId:
    return (1 << n) - 1


def check_subset(subset: SubsetId, n: int) -> SubsetId:
    if not isinstance(subset, int) or isinstance(subset, bool):
        raise MalformedSubsetError(f"subset must be an int bitmask, got {subset!r}")
    if subset < 0 or subset >> n:
        raise MalformedSubsetError(
            f"subset {subset:#b} has bits outside a ground set of {n} points"
        )
    return subset


def from_points(points: Iterable[int], n: int) -> SubsetId:
    mask = 0
    for p in points:
        if not 0 <= p < n:
            raise MalformedSubsetError(f"point {p} outside ground set of size {n}")
        mask |= 1 << p
    return mask


def members(subset: SubsetId) -> Iterator[int]:
    """Point ids of ``subset`` in ascending order."""
    i = 0
    while subset:
        if subset & 1:
            yield i
        subset >>= 1
        i += 1


def to_list(subset: SubsetId) -> List[int]:
    return list(members(subset))


def size(subset: SubsetId) -> int:
    return subset.bit_count()


def image(table: Sequence[int], subset: SubsetId) -> SubsetId:
    """Elementwise image ``{table[a] : a in subset}``."""
    out = 0
    for a in members(subset):
        out |= 1 << table[a]
    return out


def singletons(n: int) -> List[SubsetId]:
    return [1 << i for i in range(n)]


def nonempty(n: int) -> range:
    """All nonempty subsets in ascending bitmask order."""
    return range(1, 1 << n)


def sample(n: int, count: int, seed: int) -> List[SubsetId]:
    """
    All singletons, the full set and ``count`` seeded pseudo-random nonempty
    subsets, deduplicated in ascending order.
    """
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(count, n), endpoint=False)
    drawn = {sum(1 << i for i in np.flatnonzero(row).tolist()) for row in bits}
    drawn.discard(EMPTY)
    return sorted(drawn | set(singletons(n)) | {full(n)})


def quantify(n: int, cap: int, count: int, seed: int) -> Sequence[SubsetId]:
    """Every nonempty subset when ``n <= cap``, else :func:`sample`."""
    if n <= cap:
        return nonempty(n)
    return sample(n, count, seed)

"""
Finite Čech and descriptive proximity spaces.

A :class:`ProximitySpace` is generated by a reflexive, symmetric point
relation; set-level nearness is its lift,
``A δ B  <=>  there are a in A, b in B with near(a, b)``.
An optional :class:`ProbeMap` assigns every point a quantized feature vector
and drives the descriptive relation ``δ_Φ``.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import subsets
from .cluster import partitioned_scan
from .errors import LengthMismatchError, NoProbeError
from .quantize import DEFAULT_QUANTUM, FeatureVector, Number, Quantum
from .reports import Check, Report, Verdict, subset_witness
from .settings import DEFAULT_LIMITS, Limits
from .subsets import SubsetId

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProbeMap:
    """
    Total map from points to feature vectors of one fixed dimension.

    Distinct vectors are numbered densely (in sorted order) as feature
    classes, so a description ``Φ(A)`` is stored as a bitmask over classes.
    """

    features: Tuple[FeatureVector, ...]
    dimension: int
    quantum: Quantum = DEFAULT_QUANTUM
    classes: Tuple[FeatureVector, ...] = field(init=False, repr=False, compare=False)
    class_of: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise LengthMismatchError("feature dimension must be >= 1")
        for i, fv in enumerate(self.features):
            if fv.dimension != self.dimension:
                raise LengthMismatchError(
                    f"point {i} has a {fv.dimension}-vector, expected {self.dimension}"
                )
        classes = tuple(sorted(set(self.features)))
        index = {fv: k for k, fv in enumerate(classes)}
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "class_of", tuple(index[fv] for fv in self.features))

    @classmethod
    def from_values(
        cls,
        rows: Sequence[Sequence[Number]],
        quantum: Quantum = DEFAULT_QUANTUM,
    ) -> "ProbeMap":
        vectors = tuple(FeatureVector.from_values(r, quantum) for r in rows)
        if not vectors:
            raise LengthMismatchError("a probe needs at least one point")
        return cls(vectors, vectors[0].dimension, quantum)

    def __len__(self) -> int:
        return len(self.features)

    def as_array(self) -> np.ndarray:
        """Grid numerators as an ``(n, d)`` int64 array."""
        return np.array([fv.components for fv in self.features], dtype=np.int64)

    def class_mask(self, subset: SubsetId) -> int:
        mask = 0
        for p in subsets.members(subset):
            mask |= 1 << self.class_of[p]
        return mask

    def relabel(self, table: Sequence[int]) -> "ProbeMap":
        """Probe on a relabeled ground set: point ``table[i]`` gets ``Φ(i)``."""
        moved: Dict[int, FeatureVector] = {j: self.features[i] for i, j in enumerate(table)}
        out = tuple(moved[j] for j in range(len(self.features)))
        return ProbeMap(out, self.dimension, self.quantum)


@dataclass(frozen=True)
class ProximitySpace:
    """
    A finite proximity space on points ``0..n-1``.

    ``neighbors[i]`` is the bitmask of points near ``i``; the relation is
    reflexive and symmetric.
    """

    n: int
    neighbors: Tuple[int, ...]
    probe: Optional[ProbeMap] = None
    name: str = ""

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("a proximity space needs at least one point")
        if len(self.neighbors) != self.n:
            raise LengthMismatchError(
                f"{len(self.neighbors)} neighbor masks for {self.n} points"
            )
        for i, mask in enumerate(self.neighbors):
            subsets.check_subset(mask, self.n)
            if not (mask >> i) & 1:
                raise ValueError(f"relation is not reflexive at point {i}")
            for j in subsets.members(mask):
                if not (self.neighbors[j] >> i) & 1:
                    raise ValueError(f"relation is not symmetric at ({i}, {j})")
        if self.probe is not None and len(self.probe) != self.n:
            raise LengthMismatchError(
                f"probe covers {len(self.probe)} points, space has {self.n}"
            )

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Tuple[int, int]],
        probe: Optional[ProbeMap] = None,
        name: str = "",
    ) -> "ProximitySpace":
        """Reflexive symmetric closure of an edge list."""
        masks = [1 << i for i in range(n)]
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) outside ground set of size {n}")
            masks[a] |= 1 << b
            masks[b] |= 1 << a
        return cls(n, tuple(masks), probe, name)

    @classmethod
    def discrete(cls, n: int, probe: Optional[ProbeMap] = None) -> "ProximitySpace":
        """Identity relation only."""
        return cls(n, tuple(1 << i for i in range(n)), probe)

    def near(self, a: int, b: int) -> bool:
        return bool((self.neighbors[a] >> b) & 1)

    def edges(self) -> List[Tuple[int, int]]:
        """Non-reflexive pairs ``a < b`` of the point relation."""
        return [
            (a, b) for a in range(self.n) for b in subsets.members(self.neighbors[a]) if a < b
        ]

    def with_probe(self, probe: Optional[ProbeMap]) -> "ProximitySpace":
        return ProximitySpace(self.n, self.neighbors, probe, self.name)

    def require_probe(self) -> ProbeMap:
        if self.probe is None:
            raise NoProbeError(f"space {self.name or '<anonymous>'} has no probe map")
        return self.probe

    @property
    def full(self) -> SubsetId:
        return subsets.full(self.n)

    def neighborhood(self, subset: SubsetId) -> SubsetId:
        """Union of the neighbor masks of the members of ``subset``."""
        out = 0
        for a in subsets.members(subset):
            out |= self.neighbors[a]
        return out


# ---------------------------------------------------------------------------
# Set-level relations
# ---------------------------------------------------------------------------


def set_near(space: ProximitySpace, a: SubsetId, b: SubsetId) -> bool:
    subsets.check_subset(a, space.n)
    subsets.check_subset(b, space.n)
    if not a or not b:
        return False
    return bool(space.neighborhood(a) & b)


def feature_image(space: ProximitySpace, a: SubsetId) -> FrozenSet[FeatureVector]:
    """The description ``Φ(A)``."""
    probe = space.require_probe()
    subsets.check_subset(a, space.n)
    return frozenset(probe.features[p] for p in subsets.members(a))


def _class_mask(space: ProximitySpace, a: SubsetId) -> int:
    probe = space.require_probe()
    subsets.check_subset(a, space.n)
    return probe.class_mask(a)


def desc_near(space: ProximitySpace, a: SubsetId, b: SubsetId) -> bool:
    ma = _class_mask(space, a)
    mb = _class_mask(space, b)
    return bool(ma & mb)


def desc_equal(space: ProximitySpace, a: SubsetId, b: SubsetId) -> bool:
    """``A =_des B``, i.e. ``Φ(A) = Φ(B)``."""
    return _class_mask(space, a) == _class_mask(space, b)


def desc_intersection(space: ProximitySpace, a: SubsetId, b: SubsetId) -> SubsetId:
    """``{x in A ∪ B : Φ(x) in Φ(A) ∩ Φ(B)}``."""
    probe = space.require_probe()
    overlap = _class_mask(space, a) & _class_mask(space, b)
    out = 0
    for x in subsets.members(a | b):
        if (overlap >> probe.class_of[x]) & 1:
            out |= 1 << x
    return out


def desc_closure(space: ProximitySpace, a: SubsetId) -> SubsetId:
    """``cl_Φ A = {x in X : Φ(x) in Φ(A)}``."""
    probe = space.require_probe()
    image = _class_mask(space, a)
    out = 0
    for x in range(space.n):
        if (image >> probe.class_of[x]) & 1:
            out |= 1 << x
    return out


def desc_near_implies_desc_intersection(
    space: ProximitySpace, a: SubsetId, b: SubsetId
) -> bool:
    """Truth of ``A δ_Φ B  =>  A ∩_Φ B ≠ ∅`` for one pair (always true)."""
    return not desc_near(space, a, b) or desc_intersection(space, a, b) != 0


# ---------------------------------------------------------------------------
# Extensional tables and the axiom checker
# ---------------------------------------------------------------------------


def _member_matrix(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)[:, None]
    return ((idx >> np.arange(n, dtype=np.int64)[None, :]) & 1).astype(bool)


def lifted_table(space: ProximitySpace, limits: Limits = DEFAULT_LIMITS) -> np.ndarray:
    """``T[A, B] = A δ B`` over all subset pairs of the lifted relation."""
    limits.require_exhaustive(space.n, "lifted relation table")
    n = space.n
    near = np.array(
        [[space.near(a, b) for b in range(n)] for a in range(n)], dtype=np.int64
    )
    members = _member_matrix(n).astype(np.int64)
    # neighborhood of every subset as an indicator row, then test overlap with B
    reach = (members @ near) > 0
    return (reach.astype(np.int64) @ members.T) > 0


def descriptive_table(
    space: ProximitySpace, limits: Limits = DEFAULT_LIMITS
) -> np.ndarray:
    """``T[A, B] = A δ_Φ B`` over all subset pairs."""
    probe = space.require_probe()
    limits.require_exhaustive(space.n, "descriptive relation table")
    masks = np.array(
        [probe.class_mask(s) for s in range(1 << space.n)], dtype=np.int64
    )
    return (np.bitwise_and.outer(masks, masks) != 0).astype(bool)


def _first_true(mask: np.ndarray) -> Optional[Tuple[int, ...]]:
    hits = np.argwhere(mask)
    if hits.size == 0:
        return None
    return tuple(int(v) for v in hits[0])


def _desc_intersection_nonempty(probe: ProbeMap, n: int) -> np.ndarray:
    size = 1 << n
    members = _member_matrix(n)
    class_bits = np.array([1 << c for c in probe.class_of], dtype=np.int64)
    masks = np.array([probe.class_mask(s) for s in range(size)], dtype=np.int64)
    overlap = np.bitwise_and.outer(masks, masks)
    out = np.zeros((size, size), dtype=bool)
    for x in range(n):
        in_union = members[:, x][:, None] | members[:, x][None, :]
        out |= in_union & (np.bitwise_and(overlap, class_bits[x]) != 0).astype(bool)
    return out


def check_cech_axioms(
    table: np.ndarray,
    n: int,
    *,
    probe: Optional[ProbeMap] = None,
    relation: str = "extensional",
    limits: Limits = DEFAULT_LIMITS,
) -> Report:
    """
    Check (P.0)-(P.3) on an explicit ``2^n x 2^n`` relation table.

    With a ``probe`` the descriptive axioms (dP.0)-(dP.3) are checked instead;
    (dP.2) then uses the descriptive intersection ``∩_Φ`` of the probe.
    Witnesses are the first counterexample in ascending bitmask order.
    """
    limits.require_exhaustive(n, "axiom check")
    size = 1 << n
    table = np.asarray(table, dtype=bool)
    if table.shape != (size, size):
        raise LengthMismatchError(
            f"relation table has shape {table.shape}, expected {(size, size)}"
        )
    prefix = "P"
    if probe is not None:
        if len(probe) != n:
            raise LengthMismatchError(f"probe covers {len(probe)} points, need {n}")
        prefix = "dP"

    checks: List[Check] = []

    # (P.0) nothing is near the empty set, on either side
    hit = _first_true(table[:, 0])
    if hit is not None:
        wit: Optional[Tuple[int, int]] = (hit[0], 0)
    else:
        hit = _first_true(table[0, :])
        wit = None if hit is None else (0, hit[0])
    checks.append(_axiom(f"{prefix}.0", wit, ("A", "B")))

    # (P.1) symmetry
    checks.append(_axiom(f"{prefix}.1", _first_true(table & ~table.T), ("A", "B")))

    # (P.2) overlap implies nearness
    idx = np.arange(size, dtype=np.int64)
    if probe is None:
        overlap = (idx[:, None] & idx[None, :]) != 0
    else:
        overlap = _desc_intersection_nonempty(probe, n)
    checks.append(_axiom(f"{prefix}.2", _first_true(overlap & ~table), ("A", "B")))

    # (P.3) A δ (B ∪ C) => A δ B or A δ C
    union = idx[:, None] | idx[None, :]

    def _rows(lo: int, hi: int) -> List[Tuple[int, int, int]]:
        for a in range(lo, hi):
            row = table[a]
            bad = row[union] & ~row[:, None] & ~row[None, :]
            hit3 = _first_true(bad)
            if hit3 is not None:
                return [(a, hit3[0], hit3[1])]
        return []

    found = partitioned_scan(_rows, 0, size, partitions=limits.partitions)
    checks.append(_axiom(f"{prefix}.3", found[0] if found else None, ("A", "B", "C")))

    log.info("axiom check on %d points (%s): %s", n, relation, [c.verdict.value for c in checks])
    return Report(
        "cech-axioms" if probe is None else "descriptive-cech-axioms",
        tuple(checks),
        {"n": n, "relation": relation},
    )


def _axiom(
    name: str, hit: Optional[Tuple[int, ...]], labels: Tuple[str, ...]
) -> Check:
    if hit is None:
        return Check(name, Verdict.PASS)
    return Check(name, Verdict.FAIL, subset_witness(**dict(zip(labels, hit))))


def check_space_axioms(
    space: ProximitySpace, limits: Limits = DEFAULT_LIMITS
) -> Report:
    """Axiom reports of a space's lifted relation and, if probed, of ``δ_Φ``."""
    reports = [
        check_cech_axioms(
            lifted_table(space, limits), space.n, relation="lifted", limits=limits
        )
    ]
    if space.probe is not None:
        reports.append(
            check_cech_axioms(
                descriptive_table(space, limits),
                space.n,
                probe=space.probe,
                relation="descriptive",
                limits=limits,
            )
        )
    checks = tuple(c for r in reports for c in r.checks)
    data: Dict[str, object] = {"n": space.n, "relation": "lifted"}
    if space.name:
        data["space"] = space.name
    return Report("axioms", checks, data)


def induced_subspace(space: ProximitySpace, subset: SubsetId) -> ProximitySpace:
    """
    The relation and probe restricted to ``subset``; its points are the
    members of ``subset`` renumbered in ascending order.
    """
    subsets.check_subset(subset, space.n)
    keep = subsets.to_list(subset)
    if not keep:
        raise ValueError("cannot induce a space on the empty set")
    index = {p: k for k, p in enumerate(keep)}
    edges = [(index[a], index[b]) for a, b in space.edges() if a in index and b in index]
    probe = None
    if space.probe is not None:
        probe = ProbeMap(
            tuple(space.probe.features[p] for p in keep),
            space.probe.dimension,
            space.probe.quantum,
        )
    return ProximitySpace.from_edges(len(keep), edges, probe, space.name)

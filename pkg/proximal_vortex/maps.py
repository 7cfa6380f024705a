"""
Point maps between finite proximity spaces: proximal and descriptive
continuity, isomorphisms and descriptively invariant sets.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import subsets
from .cluster import partitioned_scan
from .errors import UnregisteredSpaceError
from .reports import Check, Report, Verdict, subset_witness
from .settings import DEFAULT_LIMITS, Limits
from .space import (
    ProximitySpace,
    desc_closure,
    descriptive_table,
    induced_subspace,
    lifted_table,
)
from .subsets import SubsetId

log = logging.getLogger(__name__)


class ContinuityMode(str, Enum):
    PROXIMAL = "proximal"
    DESCRIPTIVE = "descriptive"


@dataclass(frozen=True)
class PointMap:
    """A total function ``table`` from ``domain`` points to ``codomain`` points."""

    domain: ProximitySpace
    codomain: ProximitySpace
    table: Tuple[int, ...]
    name: str = ""

    def __post_init__(self) -> None:
        for role, space in (("domain", self.domain), ("codomain", self.codomain)):
            if not isinstance(space, ProximitySpace):
                raise UnregisteredSpaceError(f"{role} of map {self.name!r} is not a space")
        if len(self.table) != self.domain.n:
            raise UnregisteredSpaceError(
                f"map {self.name!r} has {len(self.table)} entries, "
                f"domain has {self.domain.n} points"
            )
        for a, b in enumerate(self.table):
            if not 0 <= b < self.codomain.n:
                raise UnregisteredSpaceError(
                    f"map {self.name!r} sends {a} to {b}, outside the codomain"
                )

    @classmethod
    def self_map(
        cls, space: ProximitySpace, table: Sequence[int], name: str = ""
    ) -> "PointMap":
        return cls(space, space, tuple(table), name)

    @classmethod
    def identity(cls, space: ProximitySpace) -> "PointMap":
        return cls(space, space, tuple(range(space.n)), "id")

    def __call__(self, point: int) -> int:
        return self.table[point]

    def image(self, subset: SubsetId) -> SubsetId:
        """``f(A) = {f(a) : a in A}``."""
        subsets.check_subset(subset, self.domain.n)
        return subsets.image(self.table, subset)

    @property
    def is_self_map(self) -> bool:
        return self.domain == self.codomain

    def is_bijective(self) -> bool:
        return self.domain.n == self.codomain.n and len(set(self.table)) == self.domain.n

    def inverse(self) -> "PointMap":
        if not self.is_bijective():
            raise ValueError(f"map {self.name!r} is not a bijection")
        inv = [0] * self.codomain.n
        for a, b in enumerate(self.table):
            inv[b] = a
        return PointMap(self.codomain, self.domain, tuple(inv), f"{self.name}^-1")


def compose(g: PointMap, f: PointMap) -> PointMap:
    """``g ∘ f``."""
    if f.codomain.n != g.domain.n:
        raise UnregisteredSpaceError("cannot compose: codomain of f is not the domain of g")
    return PointMap(
        f.domain, g.codomain, tuple(g.table[b] for b in f.table), f"{g.name}∘{f.name}"
    )


def restrict(f: PointMap, subset: SubsetId) -> PointMap:
    """The self-map ``f|X : X -> X``; requires ``f(X) ⊆ X``."""
    if not f.is_self_map:
        raise ValueError("only self-maps can be restricted")
    if f.image(subset) & ~subset:
        raise ValueError("subset is not mapped into itself")
    keep = subsets.to_list(subset)
    index = {p: k for k, p in enumerate(keep)}
    sub = induced_subspace(f.domain, subset)
    return PointMap(sub, sub, tuple(index[f.table[p]] for p in keep), f"{f.name}|X")


# ---------------------------------------------------------------------------
# Continuity
# ---------------------------------------------------------------------------


def _point_violation(f: PointMap, mode: ContinuityMode) -> Optional[Tuple[int, int]]:
    dom, cod = f.domain, f.codomain
    if mode is ContinuityMode.PROXIMAL:
        for a in range(dom.n):
            for b in subsets.members(dom.neighbors[a]):
                if not cod.near(f.table[a], f.table[b]):
                    return a, b
        return None
    p1, p2 = dom.require_probe(), cod.require_probe()
    for a in range(dom.n):
        for b in range(a + 1, dom.n):
            if p1.class_of[a] == p1.class_of[b] and (
                p2.class_of[f.table[a]] != p2.class_of[f.table[b]]
            ):
                return a, b
    return None


def _subset_oracle(
    f: PointMap, mode: ContinuityMode, limits: Limits
) -> Optional[Tuple[int, int]]:
    dom, cod = f.domain, f.codomain
    images = np.array(
        [subsets.image(f.table, s) for s in range(1 << dom.n)], dtype=np.int64
    )
    if mode is ContinuityMode.PROXIMAL:
        near1 = lifted_table(dom, limits)
        reach = np.array([cod.neighborhood(int(s)) for s in images], dtype=np.int64)
        near2 = (np.bitwise_and.outer(reach, images) != 0) & (images[:, None] != 0)
    else:
        near1 = descriptive_table(dom, limits)
        probe2 = cod.require_probe()
        classes = np.array([probe2.class_mask(int(s)) for s in images], dtype=np.int64)
        near2 = np.bitwise_and.outer(classes, classes) != 0
    bad = np.argwhere(near1 & ~near2)
    if bad.size == 0:
        return None
    return int(bad[0][0]), int(bad[0][1])


def _continuity(
    f: PointMap, mode: ContinuityMode, limits: Limits, *, subject: str
) -> Report:
    point = _point_violation(f, mode)
    checks: List[Check] = [
        Check(
            "point-level",
            Verdict.PASS if point is None else Verdict.FAIL,
            None if point is None else {"a": point[0], "b": point[1]},
        )
    ]
    if f.domain.n <= min(limits.oracle_cap, limits.exhaustive_cap):
        oracle = _subset_oracle(f, mode, limits)
        checks.append(
            Check(
                "subset-oracle",
                Verdict.PASS if oracle is None else Verdict.FAIL,
                None if oracle is None else subset_witness(A=oracle[0], B=oracle[1]),
            )
        )
        if (point is None) != (oracle is None):
            checks.append(
                Check(
                    "agreement",
                    Verdict.FAIL,
                    note="point-level check and subset oracle disagree",
                )
            )
    else:
        checks.append(
            Check(
                "subset-oracle",
                Verdict.INAPPLICABLE,
                note=f"{f.domain.n} points exceed oracle cap {limits.oracle_cap}",
            )
        )
    data: Dict[str, object] = {"map": f.name, "mode": mode.value}
    if mode is ContinuityMode.PROXIMAL:
        data["relation"] = "lifted"
    return Report(subject, tuple(checks), data)


def check_proximal_continuity(f: PointMap, limits: Limits = DEFAULT_LIMITS) -> Report:
    """``A δ₁ B  =>  f(A) δ₂ f(B)`` for all subset pairs."""
    return _continuity(f, ContinuityMode.PROXIMAL, limits, subject="proximal-continuity")


def check_descriptive_continuity(
    f: PointMap, limits: Limits = DEFAULT_LIMITS
) -> Report:
    """``A δ_Φ₁ B  =>  f(A) δ_Φ₂ f(B)`` for all subset pairs."""
    f.domain.require_probe()
    f.codomain.require_probe()
    return _continuity(
        f, ContinuityMode.DESCRIPTIVE, limits, subject="descriptive-continuity"
    )


def check_continuity(
    f: PointMap, mode: ContinuityMode, limits: Limits = DEFAULT_LIMITS
) -> Report:
    if mode is ContinuityMode.PROXIMAL:
        return check_proximal_continuity(f, limits)
    return check_descriptive_continuity(f, limits)


def is_continuous(f: PointMap, mode: ContinuityMode) -> bool:
    """Point-level verdict only (equivalent to the subset condition)."""
    return _point_violation(f, mode) is None


def _bijection_witness(h: PointMap) -> Optional[Dict[str, object]]:
    if h.domain.n != h.codomain.n:
        return {"domain": h.domain.n, "codomain": h.codomain.n}
    seen: Dict[int, int] = {}
    for a, b in enumerate(h.table):
        if b in seen:
            return {"collision": [seen[b], a], "image": b}
        seen[b] = a
    return None


def check_isomorphism(
    h: PointMap, mode: ContinuityMode, limits: Limits = DEFAULT_LIMITS
) -> Report:
    """Bijective, continuous in ``mode``, with a continuous inverse."""
    wit = _bijection_witness(h)
    if wit is not None:
        return Report(
            "isomorphism",
            (Check("bijective", Verdict.NOT_BIJECTIVE, wit),),
            {"map": h.name, "mode": mode.value},
        )
    forward = check_continuity(h, mode, limits)
    backward = check_continuity(h.inverse(), mode, limits)
    checks = [Check("bijective", Verdict.PASS)]
    for direction, rep in (("forward", forward), ("inverse", backward)):
        checks.extend(
            Check(f"{direction}/{c.name}", c.verdict, c.witness, c.note) for c in rep.checks
        )
    return Report("isomorphism", tuple(checks), {"map": h.name, "mode": mode.value})


# ---------------------------------------------------------------------------
# Descriptively invariant sets
# ---------------------------------------------------------------------------


def is_desc_invariant(f: PointMap, subset: SubsetId) -> bool:
    """``Φ(f(A)) ⊆ Φ(A)``."""
    probe = f.domain.require_probe()
    image = probe.class_mask(f.image(subset))
    return image & ~probe.class_mask(subset) == 0


def find_invariant_subsets(f: PointMap, limits: Limits = DEFAULT_LIMITS) -> List[SubsetId]:
    """All descriptively invariant subsets, ``∅`` included, ascending."""
    f.domain.require_probe()
    limits.require_exhaustive(f.domain.n, "invariant-subset scan")

    def _chunk(lo: int, hi: int) -> List[SubsetId]:
        return [s for s in range(lo, hi) if is_desc_invariant(f, s)]

    return partitioned_scan(_chunk, 0, 1 << f.domain.n, partitions=limits.partitions)


def invariance_closure_properties(
    f: PointMap, family: Sequence[SubsetId], limits: Limits = DEFAULT_LIMITS
) -> Report:
    """
    Union, intersection and descriptive closures of an invariant family.

    The union and closure cases are theorems: a failure there is FAIL. The
    intersection case only holds when ``Φ(∩Aᵢ) = ∩Φ(Aᵢ)`` (e.g. injective
    probes); a failure is reported as COUNTEREXAMPLE with its witness. The
    closure case needs ``f`` descriptively continuous, else INAPPLICABLE.
    """
    probe = f.domain.require_probe()
    data = {"map": f.name, "family": [subsets.to_list(a) for a in family]}
    not_invariant = [a for a in family if not is_desc_invariant(f, a)]
    if not_invariant:
        return Report(
            "invariance-closure",
            (
                Check(
                    "family",
                    Verdict.INAPPLICABLE,
                    subset_witness(A=not_invariant[0]),
                    note="member is not descriptively invariant",
                ),
            ),
            data,
        )

    union = 0
    inter = f.domain.full
    for a in family:
        union |= a
        inter &= a

    checks: List[Check] = []
    checks.append(
        Check(
            "union",
            Verdict.PASS if is_desc_invariant(f, union) else Verdict.FAIL,
            None if is_desc_invariant(f, union) else subset_witness(union=union),
        )
    )
    if is_desc_invariant(f, inter):
        checks.append(Check("intersection", Verdict.PASS))
    else:
        injective = len(set(probe.class_of)) == f.domain.n
        checks.append(
            Check(
                "intersection",
                Verdict.FAIL if injective else Verdict.COUNTEREXAMPLE,
                subset_witness(intersection=inter),
                note=None
                if injective
                else "Φ of the intersection is smaller than the intersection of Φ-images",
            )
        )
        log.warning("intersection of invariant sets is not invariant under %s", f.name)

    if not is_continuous(f, ContinuityMode.DESCRIPTIVE):
        checks.append(
            Check(
                "closure",
                Verdict.INAPPLICABLE,
                note="map is not descriptively continuous",
            )
        )
    else:
        bad = [a for a in family if not is_desc_invariant(f, desc_closure(f.domain, a))]
        checks.append(
            Check(
                "closure",
                Verdict.FAIL if bad else Verdict.PASS,
                subset_witness(A=bad[0]) if bad else None,
            )
        )
    return Report("invariance-closure", tuple(checks), data)

"""
Iteration of self-maps on subsets, orbit analysis and classification of
descriptively fixed, eventually fixed and almost fixed subsets.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx

from . import geometry, subsets
from .cluster import partitioned_scan
from .complex import PlanarVortex, has_hole, vortex_to_space
from .errors import CapExceededError, UnregisteredSpaceError
from .freegroup import FiniteGroupTable, is_amenable_witness
from .maps import PointMap, check_proximal_continuity, restrict
from .reports import Check, Report, Verdict, subset_witness
from .settings import DEFAULT_LIMITS, Limits
from .space import ProbeMap, ProximitySpace
from .subsets import SubsetId

log = logging.getLogger(__name__)

CONSISTENT = "CONSISTENT"
COUNTEREXAMPLE_AT_COMBINATORIAL_LEVEL = "COUNTEREXAMPLE-AT-COMBINATORIAL-LEVEL"

# iterate semigroups larger than this are refused
POWER_SEMIGROUP_CAP = 4096


def iterate(f: PointMap, subset: SubsetId, n: int) -> SubsetId:
    """``fⁿ(A)``; ``f⁰(A) = A``."""
    if n < 0:
        raise ValueError(f"iteration count must be >= 0, got {n}")
    out = subsets.check_subset(subset, f.domain.n)
    for _ in range(n):
        nxt = subsets.image(f.table, out)
        if nxt == out:
            break
        out = nxt
    return out


@dataclass(frozen=True)
class OrbitRecord:
    """
    ``trajectory`` lists ``A, f(A), ...`` up to (not including) the first
    repeated subset, which is ``trajectory[preperiod]``.
    """

    seed: SubsetId
    preperiod: int
    period: int
    trajectory: Tuple[SubsetId, ...]

    def at(self, n: int) -> SubsetId:
        """``fⁿ(seed)`` for any ``n >= 0``, read off the closed orbit."""
        if n < len(self.trajectory):
            return self.trajectory[n]
        return self.trajectory[self.preperiod + (n - self.preperiod) % self.period]


def orbit(f: PointMap, subset: SubsetId, limits: Limits = DEFAULT_LIMITS) -> OrbitRecord:
    limits.require_exhaustive(f.domain.n, "orbit search")
    subsets.check_subset(subset, f.domain.n)
    seen: Dict[SubsetId, int] = {}
    trajectory: List[SubsetId] = []
    cur = subset
    while cur not in seen:
        seen[cur] = len(trajectory)
        trajectory.append(cur)
        cur = subsets.image(f.table, cur)
    pre = seen[cur]
    return OrbitRecord(subset, pre, len(trajectory) - pre, tuple(trajectory))


class FixedTag(str, Enum):
    FIXED_DESC = "FIXED_DESC"
    EVENTUALLY_FIXED_DESC = "EVENTUALLY_FIXED_DESC"
    ALMOST_FIXED_DESC = "ALMOST_FIXED_DESC"
    # flag only: carried next to the strongest descriptive tag
    POINT_FIXED = "POINT_FIXED"
    NONE = "NONE"


@dataclass(frozen=True)
class FixedClass:
    """
    Strongest descriptive tag of a subset, ``n`` for EVENTUALLY_FIXED_DESC,
    and the first point ``a`` of the subset with ``f(a) = a`` if any.
    """

    tag: FixedTag
    n: Optional[int] = None
    point_witness: Optional[int] = None

    @property
    def point_fixed(self) -> bool:
        return self.point_witness is not None

    @property
    def tags(self) -> FrozenSet[FixedTag]:
        out = {self.tag}
        if self.point_fixed:
            out.add(FixedTag.POINT_FIXED)
        return frozenset(out)

    @property
    def witness(self) -> Optional[int]:
        return self.n if self.n is not None else self.point_witness

    def label(self) -> str:
        if self.tag is FixedTag.EVENTUALLY_FIXED_DESC:
            return f"{self.tag.value}({self.n})"
        return self.tag.value

    def to_dict(self, subset: SubsetId) -> Dict[str, Any]:
        return {
            "subset": subsets.to_list(subset),
            "tag": self.tag.value,
            "witness_n": self.n,
            "point_witness": self.point_witness,
        }


def classify_fixed(
    f: PointMap,
    subset: SubsetId,
    probe: Optional[ProbeMap] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> FixedClass:
    """
    FIXED_DESC iff ``Φ(f(A)) = Φ(A)``; otherwise EVENTUALLY_FIXED_DESC(n)
    for the least ``n > 1`` with ``Φ(fⁿ(A)) = Φ(A)``, searched up to
    preperiod + period of the orbit of ``A``; otherwise ALMOST_FIXED_DESC
    iff ``A δ_Φ f(A)``; otherwise NONE. Only the strongest tag is returned.
    """
    if probe is None:
        probe = f.domain.require_probe()
    subsets.check_subset(subset, f.domain.n)
    point = next((a for a in subsets.members(subset) if f.table[a] == a), None)
    if not subset:
        return FixedClass(FixedTag.NONE)

    own = probe.class_mask(subset)
    first = probe.class_mask(f.image(subset))
    if first == own:
        return FixedClass(FixedTag.FIXED_DESC, point_witness=point)

    rec = orbit(f, subset, limits)
    for n in range(2, rec.preperiod + rec.period + 1):
        if probe.class_mask(rec.at(n)) == own:
            return FixedClass(FixedTag.EVENTUALLY_FIXED_DESC, n, point)
    if own & first:
        return FixedClass(FixedTag.ALMOST_FIXED_DESC, point_witness=point)
    return FixedClass(FixedTag.NONE, point_witness=point)


def scan_fixed_subsets(
    f: PointMap,
    tags: Optional[Iterable[FixedTag]] = None,
    *,
    probe: Optional[ProbeMap] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> List[Tuple[SubsetId, FixedClass]]:
    """
    Classify every nonempty subset in ascending bitmask order, keeping those
    whose tags meet ``tags`` (all of them when ``tags`` is None).
    """
    if probe is None:
        probe = f.domain.require_probe()
    limits.require_exhaustive(f.domain.n, "fixed-subset scan")
    wanted = None if tags is None else frozenset(FixedTag(t) for t in tags)

    def _chunk(lo: int, hi: int) -> List[Tuple[SubsetId, FixedClass]]:
        out = []
        for s in range(lo, hi):
            fc = classify_fixed(f, s, probe, limits)
            if wanted is None or fc.tags & wanted:
                out.append((s, fc))
        return out

    found = partitioned_scan(_chunk, 1, 1 << f.domain.n, partitions=limits.partitions)
    log.info("fixed-subset scan of %s: %d subsets kept", f.name or "<map>", len(found))
    return found


def fixed_subsets_report(
    f: PointMap,
    tags: Optional[Iterable[FixedTag]] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> Report:
    found = scan_fixed_subsets(f, tags, limits=limits)
    counts: Dict[str, int] = {}
    for _, fc in found:
        counts[fc.tag.value] = counts.get(fc.tag.value, 0) + 1
    whole = f.domain.full
    invariant = f.image(whole) & ~whole == 0
    return Report(
        "fixed-subsets",
        (Check("whole-space-invariant", Verdict.PASS if invariant else Verdict.FAIL),),
        {
            "map": f.name,
            "counts": counts,
            "subsets": [fc.to_dict(s) for s, fc in found],
        },
    )


# ---------------------------------------------------------------------------
# Vortexes
# ---------------------------------------------------------------------------


def vortex_fixed_point_check(
    v: PlanarVortex,
    f: PointMap,
    subset: Optional[SubsetId] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> Report:
    """
    Evidence for the fixed-point property of a continuous self-map of a vortex.

    Looks for a vertex with ``f(x) = x`` and for descriptively fixed subsets,
    and labels the outcome CONSISTENT or
    COUNTEREXAMPLE-AT-COMBINATORIAL-LEVEL. The geometric argument runs
    through affine realizations; a map that is proximally continuous on the
    combinatorial space can still move every vertex (a one-step cycle
    rotation does).

    For a vortex with a hole, ``subset`` names an ``f``-invariant vertex set
    in convex position and the restriction of ``f`` to it is examined.
    """
    ids = v.vertex_ids
    if f.domain.n != len(ids) or not f.is_self_map:
        raise UnregisteredSpaceError(
            f"map {f.name!r} is not a self-map of the {len(ids)} vertices of {v.name!r}"
        )
    data: Dict[str, Any] = {"complex": v.name, "map": f.name}

    continuity = check_proximal_continuity(f, limits)
    if not continuity.passed:
        data["outcome"] = Verdict.INAPPLICABLE.value
        return Report(
            "vortex-fixed-point",
            (
                Check(
                    "continuity",
                    Verdict.INAPPLICABLE,
                    continuity.failures()[0].witness,
                    note="map is not proximally continuous",
                ),
            ),
            data,
        )
    checks: List[Check] = [Check("continuity", Verdict.PASS)]

    keep = list(range(len(ids)))
    g = f
    if subset is not None:
        subsets.check_subset(subset, f.domain.n)
        if not subset or f.image(subset) & ~subset:
            data["outcome"] = Verdict.INAPPLICABLE.value
            checks.append(
                Check(
                    "subset",
                    Verdict.INAPPLICABLE,
                    subset_witness(X=subset),
                    note="subset is empty or not mapped into itself",
                )
            )
            return Report("vortex-fixed-point", tuple(checks), data)
        keep = subsets.to_list(subset)
        if not geometry.is_convex_position([v.position(ids[p]) for p in keep]):
            data["outcome"] = Verdict.INAPPLICABLE.value
            checks.append(
                Check(
                    "subset",
                    Verdict.INAPPLICABLE,
                    subset_witness(X=subset),
                    note="subset vertices are not in convex position",
                )
            )
            return Report("vortex-fixed-point", tuple(checks), data)
        checks.append(Check("subset", Verdict.PASS, subset_witness(X=subset)))
        g = restrict(f, subset)
    elif has_hole(v):
        data["hole"] = True

    fixed = [ids[keep[a]] for a in range(g.domain.n) if g.table[a] == a]
    data["fixed_vertices"] = fixed
    whole = orbit(g, g.domain.full, limits) if g.domain.n <= limits.exhaustive_cap else None
    if whole is not None:
        data["whole_space_period"] = whole.period
        data["whole_space_preperiod"] = whole.preperiod

    if g.domain.probe is not None and g.domain.n <= limits.exhaustive_cap:
        found = scan_fixed_subsets(g, [FixedTag.FIXED_DESC], limits=limits)
        data["fixed_desc_subsets"] = len(found)
        checks.append(
            Check(
                "fixed-subsets",
                Verdict.PASS,
                {"subset": [ids[keep[p]] for p in subsets.members(found[0][0])]}
                if found
                else None,
            )
        )

    if fixed:
        data["outcome"] = CONSISTENT
        checks.append(Check("fixed-vertex", Verdict.PASS, {"vertex": fixed[0]}))
    else:
        data["outcome"] = COUNTEREXAMPLE_AT_COMBINATORIAL_LEVEL
        log.warning(
            "vortex %s: continuous map %s fixes no vertex", v.name or "<anonymous>", f.name
        )
        checks.append(
            Check(
                "fixed-vertex",
                Verdict.COUNTEREXAMPLE,
                note=(
                    "no vertex is fixed although the map is proximally continuous; "
                    "the fixed-point argument needs an affine geometric realization "
                    "of the map, which the combinatorial space does not supply"
                ),
            )
        )
    return Report("vortex-fixed-point", tuple(checks), data)


def sink_contraction(
    v: PlanarVortex, sink: int, space: Optional[ProximitySpace] = None, name: str = ""
) -> PointMap:
    """
    A proximally continuous self-map moving every vertex one step closer
    to ``sink``.

    Fixes a geodesic ``sink = γ₀, γ₁, ...`` out to a farthest vertex and
    sends a vertex at union-graph distance ``d`` to ``γ_{max(d-1, 0)}``.
    Neighbouring vertices differ in distance by at most one, so their images
    are equal or adjacent on the geodesic. The sink is the only fixed vertex.

    Raises
    ------
    ValueError
        If ``sink`` is not a vertex of ``v``.
    """
    ids = v.vertex_ids
    if sink not in ids:
        raise ValueError(f"sink {sink} is not a vertex of {v.name!r}")
    graph = v.union_graph()
    dist = nx.single_source_shortest_path_length(graph, sink)
    far = max(ids, key=lambda vid: (dist[vid], -vid))
    geodesic = nx.shortest_path(graph, sink, far)
    index = {vid: k for k, vid in enumerate(ids)}
    table = [index[geodesic[max(dist[vid] - 1, 0)]] for vid in ids]
    target = space if space is not None else vortex_to_space(v)
    return PointMap.self_map(target, table, name or f"contract-to-{sink}")


# ---------------------------------------------------------------------------
# Iterate semigroup
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerSemigroup:
    """
    ``{f, f², ...}`` as point tables; ``powers[k]`` is ``f^(k+1)``.
    ``f^(index + period) = f^index`` with both minimal.
    """

    index: int
    period: int
    powers: Tuple[Tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.powers)

    def power(self, m: int) -> Tuple[int, ...]:
        if m < 1:
            raise ValueError("powers start at 1")
        if m > self.order:
            m = self.index + (m - self.index) % self.period
        return self.powers[m - 1]

    def kernel(self) -> FiniteGroupTable:
        """
        The cyclic group ``{f^m : index <= m < index + period}``; element
        ``k`` is ``f^(index + k)``.
        """
        base = self.index
        p = self.period

        def reduce(m: int) -> int:
            return base + (m - base) % p

        return FiniteGroupTable(
            tuple(
                tuple(reduce(2 * base + a + b) - base for b in range(p)) for a in range(p)
            )
        )


def power_semigroup(f: PointMap) -> PowerSemigroup:
    if not f.is_self_map:
        raise ValueError("power semigroups need a self-map")
    seen: Dict[Tuple[int, ...], int] = {}
    powers: List[Tuple[int, ...]] = []
    cur = f.table
    while cur not in seen:
        if len(powers) >= POWER_SEMIGROUP_CAP:
            raise CapExceededError(len(powers), POWER_SEMIGROUP_CAP, "power semigroup")
        seen[cur] = len(powers) + 1
        powers.append(cur)
        cur = tuple(f.table[x] for x in cur)
    index = seen[cur]
    return PowerSemigroup(index, len(powers) + 1 - index, tuple(powers))


def check_power_semigroup(f: PointMap, limits: Limits = DEFAULT_LIMITS) -> Report:
    """Commutativity of the iterate semigroup and an invariant mean on its kernel."""
    sg = power_semigroup(f)
    commutes = all(
        tuple(a[x] for x in b) == tuple(b[x] for x in a)
        for i, a in enumerate(sg.powers)
        for b in sg.powers[i + 1 :]
    )
    ok, description = is_amenable_witness(sg.kernel(), limits=limits)
    return Report(
        "power-semigroup",
        (
            Check("commutative", Verdict.PASS if commutes else Verdict.FAIL),
            Check("kernel-invariant-mean", Verdict.PASS if ok else Verdict.FAIL),
        ),
        {
            "map": f.name,
            "index": sg.index,
            "period": sg.period,
            "order": sg.order,
            "kernel": description,
        },
    )

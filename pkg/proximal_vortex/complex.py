"""
Planar vortex cell complexes: nested filled 1-cycles joined by shared
vertices or bridge edges.
"""
import logging
import warnings
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from . import geometry
from .errors import VortexRejected
from .geometry import Point2
from .quantize import DEFAULT_QUANTUM, Quantum
from .reports import Check, Report, Verdict
from .space import ProbeMap, ProximitySpace

log = logging.getLogger(__name__)

NOT_NESTED = "NOT_NESTED"
NOT_SIMPLE = "NOT_SIMPLE"
DISCONNECTED = "DISCONNECTED"
DEGENERATE = "DEGENERATE"
UNDECLARED_VERTEX = "UNDECLARED_VERTEX"
BAD_BRIDGE = "BAD_BRIDGE"


@dataclass(frozen=True)
class Vertex:
    id: int
    position: Point2


@dataclass(frozen=True)
class Cycle:
    """A closed ring of vertex ids; ``filled`` is False only for a hole."""

    vertex_ids: Tuple[int, ...]
    filled: bool = True

    def __len__(self) -> int:
        return len(self.vertex_ids)

    def edges(self) -> List[Tuple[int, int]]:
        ids = self.vertex_ids
        return [(ids[i], ids[(i + 1) % len(ids)]) for i in range(len(ids))]

    def step(self, vertex_id: int, k: int = 1) -> int:
        """The vertex ``k`` edge-steps along the ring from ``vertex_id``."""
        i = self.vertex_ids.index(vertex_id)
        return self.vertex_ids[(i + k) % len(self.vertex_ids)]


@dataclass(frozen=True)
class BridgeEdge:
    a: int
    b: int

    @property
    def endpoints(self) -> Tuple[int, int]:
        return self.a, self.b


@dataclass(frozen=True)
class PlanarVortex:
    """
    Cycles ordered outermost first. Instances returned by :func:`build_vortex`
    satisfy every vortex invariant; direct construction skips validation.
    """

    vertices: Tuple[Vertex, ...]
    cycles: Tuple[Cycle, ...]
    bridges: Tuple[BridgeEdge, ...] = ()
    quantum: Quantum = DEFAULT_QUANTUM
    name: str = ""
    _positions: Dict[int, Point2] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_positions", {v.id: v.position for v in self.vertices}
        )

    @property
    def vertex_ids(self) -> List[int]:
        return sorted(self._positions)

    def position(self, vertex_id: int) -> Point2:
        return self._positions[vertex_id]

    def polygon(self, cycle: Cycle) -> List[Point2]:
        return [self._positions[i] for i in cycle.vertex_ids]

    def cycle_edges(self) -> List[Tuple[int, int]]:
        return [e for c in self.cycles for e in c.edges()]

    def all_edges(self) -> List[Tuple[int, int]]:
        return self.cycle_edges() + [b.endpoints for b in self.bridges]

    def cycles_containing(self, vertex_id: int) -> List[int]:
        return [k for k, c in enumerate(self.cycles) if vertex_id in c.vertex_ids]

    def point_of(self, vertex_id: int) -> int:
        """Index of a vertex in the ground set of :func:`vortex_to_space`."""
        return self.vertex_ids.index(vertex_id)

    def union_graph(self) -> nx.Graph:
        """Cycle edges plus bridges over all declared vertices."""
        g = nx.Graph()
        g.add_nodes_from(self.vertex_ids)
        g.add_edges_from(self.all_edges())
        return g

    def connectivity_witness(self, a: int, b: int) -> List[int]:
        """A shortest vertex path from ``a`` to ``b`` in the union graph."""
        return list(nx.shortest_path(self.union_graph(), a, b))


def canonical_cycle(cycle: Cycle, positions: Dict[int, Point2]) -> Cycle:
    """Counterclockwise ring rotated to start at its smallest vertex id."""
    ids = list(cycle.vertex_ids)
    if geometry.signed_area2([positions[i] for i in ids]) < 0:
        ids.reverse()
    k = ids.index(min(ids))
    return Cycle(tuple(ids[k:] + ids[:k]), cycle.filled)


def _validate_ring(cycle: Cycle, positions: Dict[int, Point2], k: int) -> None:
    ids = cycle.vertex_ids
    missing = [i for i in ids if i not in positions]
    if missing:
        raise VortexRejected(UNDECLARED_VERTEX, f"cycle {k} uses undeclared {missing}")
    if len(ids) < 3 or len(set(ids)) != len(ids):
        raise VortexRejected(
            DEGENERATE, f"cycle {k} needs >= 3 distinct vertices, got {list(ids)}"
        )
    poly = [positions[i] for i in ids]
    if all(geometry.cross(poly[0], poly[1], p) == 0 for p in poly[2:]):
        raise VortexRejected(DEGENERATE, f"cycle {k} has zero area")
    crossing = geometry.first_self_crossing(poly)
    if crossing is not None:
        raise VortexRejected(
            NOT_SIMPLE, f"cycle {k} edges {crossing[0]} and {crossing[1]} cross"
        )
    if geometry.signed_area2(poly) == 0:
        raise VortexRejected(DEGENERATE, f"cycle {k} has zero area")


def is_nested(outer: Cycle, inner: Cycle, positions: Mapping[int, Point2]) -> bool:
    """
    The closed polygon of ``inner`` sits in the open interior of ``outer``:
    every inner vertex is strictly inside and no inner edge touches an outer
    edge. Boundary points do not count as interior.
    """
    polys = []
    for k, c in enumerate((outer, inner)):
        poly = [positions[i] for i in c.vertex_ids]
        if len(poly) < 3 or geometry.signed_area2(poly) == 0:
            raise VortexRejected(DEGENERATE, f"polygon {k} has zero area")
        polys.append(poly)
    return geometry.polygon_strictly_inside(polys[1], polys[0])


def build_vortex(
    vertices: Iterable[Vertex],
    cycles: Sequence[Cycle],
    bridges: Sequence[BridgeEdge] = (),
    *,
    quantum: Quantum = DEFAULT_QUANTUM,
    name: str = "",
) -> PlanarVortex:
    """
    Validate and canonicalize a planar vortex.

    Raises
    ------
    VortexRejected
        With tag NOT_NESTED, NOT_SIMPLE, DISCONNECTED, DEGENERATE,
        UNDECLARED_VERTEX or BAD_BRIDGE.
    """
    verts = tuple(sorted(vertices, key=lambda v: v.id))
    positions: Dict[int, Point2] = {}
    seen: Dict[Point2, int] = {}
    for v in verts:
        if v.id in positions:
            raise VortexRejected(DEGENERATE, f"vertex id {v.id} declared twice")
        if v.position in seen:
            raise VortexRejected(
                DEGENERATE, f"vertices {seen[v.position]} and {v.id} share a position"
            )
        positions[v.id] = v.position
        seen[v.position] = v.id

    if len(cycles) < 2:
        raise VortexRejected(DEGENERATE, f"a vortex needs >= 2 cycles, got {len(cycles)}")
    for k, c in enumerate(cycles):
        _validate_ring(c, positions, k)
    canon = tuple(canonical_cycle(c, positions) for c in cycles)

    unique: List[BridgeEdge] = []
    for br in bridges:
        key = BridgeEdge(*sorted(br.endpoints))
        if key in unique:
            warnings.warn(f"duplicate bridge {br.endpoints} dropped", UserWarning)
            continue
        unique.append(key)
    vertex_sets = [set(c.vertex_ids) for c in canon]
    bridged_pairs = set()
    for br in unique:
        for end in br.endpoints:
            if end not in positions:
                raise VortexRejected(UNDECLARED_VERTEX, f"bridge uses undeclared {end}")
        homes_a = [k for k, s in enumerate(vertex_sets) if br.a in s]
        homes_b = [k for k, s in enumerate(vertex_sets) if br.b in s]
        pairs = [
            (i, j)
            for i in homes_a
            for j in homes_b
            if i != j and not (vertex_sets[i] & vertex_sets[j])
        ]
        if not pairs:
            raise VortexRejected(
                BAD_BRIDGE,
                f"bridge {br.endpoints} does not join two non-intersecting cycles",
            )
        bridged_pairs.update(tuple(sorted(p)) for p in pairs)

    for k in range(len(canon) - 1):
        outer = [positions[i] for i in canon[k].vertex_ids]
        inner = [positions[i] for i in canon[k + 1].vertex_ids]
        if vertex_sets[k] & vertex_sets[k + 1]:
            # touching cycles still nest: inner stays in the closed outer polygon
            if not geometry.polygon_within_closed(inner, outer):
                raise VortexRejected(
                    NOT_NESTED, f"cycle {k + 1} leaves the closed polygon of cycle {k}"
                )
            continue
        if not is_nested(canon[k], canon[k + 1], positions):
            raise VortexRejected(
                NOT_NESTED, f"cycle {k + 1} is not strictly inside cycle {k}"
            )
        if (k, k + 1) not in bridged_pairs:
            raise VortexRejected(
                DISCONNECTED, f"no bridge edge between cycles {k} and {k + 1}"
            )

    vortex = PlanarVortex(verts, canon, tuple(unique), quantum, name)
    if not nx.is_connected(vortex.union_graph()):
        comps = sorted(min(c) for c in nx.connected_components(vortex.union_graph()))
        raise VortexRejected(
            DISCONNECTED, f"union graph has components rooted at {comps}"
        )
    return vortex


def has_hole(v: PlanarVortex) -> bool:
    hole = not v.cycles[-1].filled
    if hole:
        log.warning(
            "vortex %s: innermost cycle is marked unfilled (modeled hole)",
            v.name or "<anonymous>",
        )
    return hole


def check_cw_conditions(complex_: PlanarVortex) -> Report:
    """
    Closure-finiteness (every edge endpoint is a declared vertex) and the
    intersection condition on 0- and 1-cells (two cells meet in a common
    sub-cell or not at all). Bridges crossing cycle edges are violations.
    """
    declared = set(complex_.vertex_ids)
    closure_bad: List[Dict[str, object]] = []
    edges = []
    for kind, (a, b) in [("cycle", e) for e in complex_.cycle_edges()] + [
        ("bridge", br.endpoints) for br in complex_.bridges
    ]:
        missing = [x for x in (a, b) if x not in declared]
        if missing:
            closure_bad.append({"edge": [a, b], "kind": kind, "undeclared": missing})
        else:
            edges.append((kind, a, b))

    checks = [
        Check(
            "closure",
            Verdict.FAIL if closure_bad else Verdict.PASS,
            {"violations": closure_bad} if closure_bad else None,
        )
    ]

    pos = complex_.position
    crossing: List[Dict[str, object]] = []
    unique = sorted({(min(a, b), max(a, b), kind) for kind, a, b in edges})
    for i in range(len(unique)):
        a, b, ka = unique[i]
        for j in range(i + 1, len(unique)):
            c, d, kc = unique[j]
            if (a, b) == (c, d):
                continue
            if not geometry.meet_only_at_shared_endpoint(pos(a), pos(b), pos(c), pos(d)):
                crossing.append({"edges": [[a, b], [c, d]], "kinds": [ka, kc]})
        for x in declared - {a, b}:
            if geometry.on_segment(pos(x), pos(a), pos(b)):
                crossing.append({"vertex": x, "edge": [a, b]})
    checks.append(
        Check(
            "intersection",
            Verdict.FAIL if crossing else Verdict.PASS,
            {"violations": crossing} if crossing else None,
            note="bridges may not cross cycle edges",
        )
    )
    return Report("cw-conditions", tuple(checks), {"complex": complex_.name})


def vortex_to_space(
    v: PlanarVortex, probe: Optional[ProbeMap] = None
) -> ProximitySpace:
    """
    Ground set = vertices (ascending id); ``near(a, b)`` iff ``a = b`` or
    ``{a, b}`` is a cycle or bridge edge.
    """
    ids = v.vertex_ids
    index = {vid: k for k, vid in enumerate(ids)}
    edges = [(index[a], index[b]) for a, b in v.all_edges()]
    return ProximitySpace.from_edges(len(ids), edges, probe, v.name)

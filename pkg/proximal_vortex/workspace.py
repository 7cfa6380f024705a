"""
Workspace files: named spaces, probes, complexes, maps and group bases in
one JSON document.

The document shape is fixed by ``workspace.schema.json`` (shipped with the
package). Decimal values are read as :class:`decimal.Decimal` and quantized
onto the workspace grid, so no binary float ever reaches a feature or a
coordinate.
"""
import json
import logging
from dataclasses import dataclass, field
from decimal import Decimal
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import jsonschema
from jsonschema.exceptions import best_match

from .complex import BridgeEdge, Cycle, PlanarVortex, Vertex, build_vortex, vortex_to_space
from .errors import (
    LengthMismatchError,
    ProximalVortexError,
    UnregisteredSpaceError,
    VortexRejected,
    WorkspaceError,
)
from .freegroup import GeneratorBasis
from .maps import PointMap
from .quantize import DEFAULT_QUANTUM, QuantizationError, Quantum
from .space import ProbeMap, ProximitySpace

log = logging.getLogger(__name__)

SECTIONS = ("probes", "spaces", "complexes", "maps", "groups")


def _schema() -> Dict[str, Any]:
    text = resources.files(__package__).joinpath("workspace.schema.json").read_text("utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class GroupDecl:
    complex: str
    basis: GeneratorBasis


@dataclass(frozen=True)
class Workspace:
    """
    A fully validated workspace. ``probe_refs`` records which probe each
    space or complex was declared with.
    """

    quantum: Quantum = DEFAULT_QUANTUM
    probes: Dict[str, ProbeMap] = field(default_factory=dict)
    spaces: Dict[str, ProximitySpace] = field(default_factory=dict)
    complexes: Dict[str, PlanarVortex] = field(default_factory=dict)
    maps: Dict[str, PointMap] = field(default_factory=dict)
    groups: Dict[str, GroupDecl] = field(default_factory=dict)
    probe_refs: Dict[str, str] = field(default_factory=dict)

    def space(self, name: str) -> ProximitySpace:
        """A declared space, or the vertex space of a declared complex."""
        if name in self.spaces:
            return self.spaces[name]
        if name in self.complexes:
            ref = self.probe_refs.get(name)
            return vortex_to_space(self.complexes[name], self.probes[ref] if ref else None)
        raise UnregisteredSpaceError(f"no space or complex named {name!r}")

    def map(self, name: str) -> PointMap:
        if name not in self.maps:
            raise UnregisteredSpaceError(f"no map named {name!r}")
        return self.maps[name]

    def complex(self, name: str) -> PlanarVortex:
        if name not in self.complexes:
            raise UnregisteredSpaceError(f"no complex named {name!r}")
        return self.complexes[name]


def _reject_duplicates(pairs: List[Tuple[str, Any]]) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for k, v in pairs:
        if k in out:
            raise WorkspaceError("", f"duplicate key {k!r}")
        out[k] = v
    return out


def _dotted(parts: Sequence[Union[str, int]]) -> str:
    out = ""
    for p in parts:
        if isinstance(p, int):
            out += f"[{p}]"
        else:
            out += f".{p}" if out else str(p)
    return out


def parse_workspace(text: str) -> Workspace:
    """
    Parse and validate a workspace document.

    Raises
    ------
    WorkspaceError
        With a line/column for JSON syntax errors and a dotted path
        (e.g. ``maps.f.table[3]``) plus the violated rule otherwise.
    """
    try:
        doc = json.loads(text, parse_float=Decimal, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as e:
        raise WorkspaceError("", e.msg, line=e.lineno, column=e.colno) from e

    error = best_match(jsonschema.Draft202012Validator(_schema()).iter_errors(doc))
    if error is not None:
        raise WorkspaceError(_dotted(list(error.absolute_path)), error.message)

    return _Builder(doc).build()


def load_workspace(path: Union[str, Path]) -> Workspace:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise WorkspaceError("", f"{p} is not UTF-8 text") from e
    log.debug("loading workspace %s", p)
    return parse_workspace(text)


class _Builder:
    def __init__(self, doc: Dict[str, Any]):
        self._doc = doc
        try:
            self._quantum = Quantum.parse(doc["quantum"]) if "quantum" in doc else DEFAULT_QUANTUM
        except QuantizationError as e:
            raise WorkspaceError("quantum", str(e)) from e
        self._ws = Workspace(quantum=self._quantum)

    def build(self) -> Workspace:
        doc = self._doc
        clash = sorted(set(doc.get("spaces", {})) & set(doc.get("complexes", {})))
        if clash:
            raise WorkspaceError(
                f"complexes.{clash[0]}", "name already used by a space"
            )
        for name, body in doc.get("probes", {}).items():
            self._probe(name, body)
        for name, body in doc.get("spaces", {}).items():
            self._space(name, body)
        for name, body in doc.get("complexes", {}).items():
            self._complex(name, body)
        for name, body in doc.get("maps", {}).items():
            self._map(name, body)
        for name, body in doc.get("groups", {}).items():
            self._group(name, body)
        log.info(
            "workspace: %s",
            ", ".join(f"{len(getattr(self._ws, s))} {s}" for s in SECTIONS),
        )
        return self._ws

    def _probe_ref(self, where: str, name: str, body: Dict[str, Any]) -> Optional[ProbeMap]:
        ref = body.get("probe")
        if ref is None:
            return None
        if ref not in self._ws.probes:
            raise WorkspaceError(f"{where}.{name}.probe", f"undeclared probe {ref!r}")
        self._ws.probe_refs[name] = ref
        return self._ws.probes[ref]

    def _probe(self, name: str, body: Dict[str, Any]) -> None:
        path = f"probes.{name}"
        dim = body["dimension"]
        for i, row in enumerate(body["features"]):
            if len(row) != dim:
                raise WorkspaceError(
                    f"{path}.features[{i}]", f"has {len(row)} components, dimension is {dim}"
                )
        try:
            probe = ProbeMap.from_values(body["features"], self._quantum)
        except QuantizationError as e:
            raise WorkspaceError(f"{path}.features", str(e)) from e
        self._ws.probes[name] = probe

    def _space(self, name: str, body: Dict[str, Any]) -> None:
        path = f"spaces.{name}"
        probe = self._probe_ref("spaces", name, body)
        n = body["points"]
        for i, (a, b) in enumerate(body.get("edges", [])):
            if a >= n or b >= n:
                raise WorkspaceError(f"{path}.edges[{i}]", f"point outside 0..{n - 1}")
        try:
            space = ProximitySpace.from_edges(
                n, [tuple(e) for e in body.get("edges", [])], probe, name
            )
        except LengthMismatchError as e:
            raise WorkspaceError(f"{path}.probe", str(e)) from e
        self._ws.spaces[name] = space

    def _complex(self, name: str, body: Dict[str, Any]) -> None:
        path = f"complexes.{name}"
        q = self._quantum
        try:
            vertices = [
                Vertex(v["id"], (q.quantize(v["position"][0]), q.quantize(v["position"][1])))
                for v in body["vertices"]
            ]
        except QuantizationError as e:
            raise WorkspaceError(f"{path}.vertices", str(e)) from e
        cycles = [Cycle(tuple(c["ring"]), c.get("filled", True)) for c in body["cycles"]]
        bridges = [BridgeEdge(a, b) for a, b in body.get("bridges", [])]
        try:
            vortex = build_vortex(vertices, cycles, bridges, quantum=q, name=name)
        except VortexRejected as e:
            raise WorkspaceError(path, str(e)) from e
        probe = self._probe_ref("complexes", name, body)
        if probe is not None and len(probe) != len(vortex.vertices):
            raise WorkspaceError(
                f"{path}.probe",
                f"probe covers {len(probe)} points, complex has {len(vortex.vertices)}",
            )
        self._ws.complexes[name] = vortex

    def _resolve(self, path: str, name: str) -> ProximitySpace:
        try:
            return self._ws.space(name)
        except UnregisteredSpaceError as e:
            raise WorkspaceError(path, f"undeclared space {name!r}") from e

    def _map(self, name: str, body: Dict[str, Any]) -> None:
        path = f"maps.{name}"
        domain = self._resolve(f"{path}.domain", body["domain"])
        codomain = self._resolve(f"{path}.codomain", body.get("codomain", body["domain"]))
        try:
            f = PointMap(domain, codomain, tuple(body["table"]), name)
        except ProximalVortexError as e:
            raise WorkspaceError(f"{path}.table", str(e)) from e
        self._ws.maps[name] = f

    def _group(self, name: str, body: Dict[str, Any]) -> None:
        path = f"groups.{name}"
        if body["complex"] not in self._ws.complexes:
            raise WorkspaceError(f"{path}.complex", f"undeclared complex {body['complex']!r}")
        homes = body.get("homes")
        try:
            basis = GeneratorBasis(
                tuple(body["basis"]), tuple(homes) if homes is not None else None
            )
        except ValueError as e:
            raise WorkspaceError(path, str(e)) from e
        self._ws.groups[name] = GroupDecl(body["complex"], basis)


def serialize_workspace(ws: Workspace) -> str:
    """Canonical JSON text; ``parse_workspace`` of it yields an equal workspace."""
    q = ws.quantum
    doc: Dict[str, Any] = {"quantum": q.text()}
    doc["probes"] = {
        name: {
            "dimension": p.dimension,
            "features": [list(fv.as_text(q)) for fv in p.features],
        }
        for name, p in ws.probes.items()
    }
    doc["spaces"] = {}
    for name, s in ws.spaces.items():
        body: Dict[str, Any] = {"points": s.n, "edges": [list(e) for e in s.edges()]}
        if name in ws.probe_refs:
            body["probe"] = ws.probe_refs[name]
        doc["spaces"][name] = body
    doc["complexes"] = {}
    for name, v in ws.complexes.items():
        body = {
            "vertices": [
                {"id": vx.id, "position": [q.to_text(vx.position[0]), q.to_text(vx.position[1])]}
                for vx in v.vertices
            ],
            "cycles": [{"ring": list(c.vertex_ids), "filled": c.filled} for c in v.cycles],
            "bridges": [list(b.endpoints) for b in v.bridges],
        }
        if name in ws.probe_refs:
            body["probe"] = ws.probe_refs[name]
        doc["complexes"][name] = body
    doc["maps"] = {
        name: {
            "domain": _space_name(ws, f.domain),
            "codomain": _space_name(ws, f.codomain),
            "table": list(f.table),
        }
        for name, f in ws.maps.items()
    }
    doc["groups"] = {}
    for name, g in ws.groups.items():
        body = {"complex": g.complex, "basis": list(g.basis.generators)}
        if g.basis.homes is not None:
            body["homes"] = list(g.basis.homes)
        doc["groups"][name] = body
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _space_name(ws: Workspace, space: ProximitySpace) -> str:
    if space.name in ws.spaces or space.name in ws.complexes:
        return space.name
    raise UnregisteredSpaceError("map refers to a space the workspace does not declare")


def write_workspace(ws: Workspace, path: Union[str, Path]) -> Path:
    out = Path(path)
    out.write_text(serialize_workspace(ws), encoding="utf-8")
    return out


def workspace_summary(ws: Workspace) -> Mapping[str, Any]:
    """Counts and sizes used by the ``validate`` report."""
    return {
        "quantum": ws.quantum.text(),
        "probes": {k: {"points": len(p), "dimension": p.dimension} for k, p in ws.probes.items()},
        "spaces": {k: {"points": s.n, "edges": len(s.edges())} for k, s in ws.spaces.items()},
        "complexes": {
            k: {
                "vertices": len(v.vertices),
                "cycles": len(v.cycles),
                "bridges": len(v.bridges),
            }
            for k, v in ws.complexes.items()
        },
        "maps": {
            k: {"domain": f.domain.name, "codomain": f.codomain.name}
            for k, f in ws.maps.items()
        },
        "groups": {
            k: {"complex": g.complex, "basis": list(g.basis.generators)}
            for k, g in ws.groups.items()
        },
    }

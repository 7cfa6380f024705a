import logging
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from dask.distributed import Client

from .. import subsets
from ..cluster import Cluster
from ..complex import check_cw_conditions
from ..conjugacy import (
    ConjugacyMode,
    extend_certificate,
    search_report,
    transfer_fixed_subsets,
    verify_conjugacy,
)
from ..dynamics import check_power_semigroup, fixed_subsets_report, vortex_fixed_point_check
from ..freegroup import is_amenable_witness, vortex_group
from ..maps import ContinuityMode, check_continuity, check_isomorphism
from ..render import write_svg
from ..reports import Check, Report, Verdict, merge
from ..settings import DEFAULT_LIMITS, Limits
from ..space import check_space_axioms
from ..workspace import Workspace, load_workspace, workspace_summary

log = logging.getLogger(__name__)

SUBCOMMANDS = ("validate", "axioms", "continuity", "fixed", "conjugacy", "amenable", "render")

CONTINUITY_MODES = tuple(m.value for m in ContinuityMode)
CONJUGACY_MODES = tuple(m.value for m in ConjugacyMode)


class WorkspaceVerifier:
    """
    WorkspaceVerifier loads one workspace file and runs one subcommand
    against it, producing a :class:`~proximal_vortex.reports.Report`.
    """

    def __init__(
        self,
        *,
        source: Union[str, Path],
        subcommand: str = "validate",
        space: Optional[str] = None,
        map_name: Optional[str] = None,
        map2: Optional[str] = None,
        conjugator: Optional[str] = None,
        complex_name: Optional[str] = None,
        group: Optional[str] = None,
        mode: Optional[str] = None,
        subset: Optional[Sequence[int]] = None,
        iterations: int = 6,
        n_max: Optional[int] = None,
        seed: int = DEFAULT_LIMITS.seed,
        out: Optional[Union[str, Path]] = None,
        partitions: int = 1,
        auto_dask_cluster: bool = False,
        workers: int = 4,
    ) -> None:
        """
        Parameters
        ----------
        source : str or Path
            Workspace JSON file.
        subcommand : str
            One of ``validate``, ``axioms``, ``continuity``, ``fixed``,
            ``conjugacy``, ``amenable``, ``render``.
        space : str, optional
            Space (or complex) checked by ``axioms``.
        map_name : str, optional
            The map ``f`` of ``continuity``, ``fixed`` and ``conjugacy``.
        map2 : str, optional
            The map ``g`` of ``conjugacy``.
        conjugator : str, optional
            A declared map ``h`` to verify as a conjugacy; without it
            ``conjugacy`` searches all bijections.
        complex_name : str, optional
            Complex for ``fixed`` (vortex fixed-point evidence), ``amenable``
            and ``render``.
        group : str, optional
            Group basis for ``amenable``; defaults to every declared group
            (of ``complex_name`` when given).
        mode : str, optional
            ``proximal``/``descriptive`` for ``continuity``; ``exact``,
            ``descriptive``, ``weak`` or ``weak-descriptive`` for
            ``conjugacy``.
        subset : sequence of int, optional
            Invariant convex vertex subset for ``fixed`` on a holed vortex,
            as point indices of the vertex space.
        iterations : int
            Depth ``N`` of the iterate transfer check.
        n_max : int, optional
            Lower the exhaustive enumeration cap.
        seed : int
            Seed of every sampled check.
        out : str or Path, optional
            SVG destination of ``render``.
        partitions : int
            Chunks exhaustive scans are split into.
        auto_dask_cluster : bool
            Start a local Dask cluster (``Cluster(n_workers=workers)``) before
            running, so partitioned scans run across processes.
        workers : int
            Worker count of the local cluster.
        """
        if subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {subcommand!r}")
        self.source = Path(source)
        self.subcommand = subcommand
        self.space = space
        self.map_name = map_name
        self.map2 = map2
        self.conjugator = conjugator
        self.complex_name = complex_name
        self.group = group
        self.mode = mode
        self.subset = tuple(subset) if subset is not None else None
        self.iterations = iterations
        self.out = Path(out) if out is not None else None

        limits: Limits = replace(DEFAULT_LIMITS, seed=seed, partitions=max(1, partitions))
        if n_max is not None:
            limits = limits.with_cap(n_max)
        self.limits = limits

        self.workspace: Workspace = load_workspace(self.source)

        self._client: Optional[Client] = None
        if auto_dask_cluster:
            cluster = Cluster(n_workers=workers)
            self._client = cluster.start()
            self.limits = replace(self.limits, partitions=max(self.limits.partitions, cluster.n_workers))

    def _need(self, value: Optional[str], flag: str) -> str:
        if value is None:
            raise ValueError(f"{self.subcommand} needs {flag}")
        return value

    def verify(self) -> Report:
        """Run the subcommand and return its report."""
        log.info("%s on %s", self.subcommand, self.source)
        handler = getattr(self, f"_{self.subcommand}")
        report: Report = handler()
        log.info("%s: %s", self.subcommand, report.verdict.value)
        return report

    def close(self) -> None:
        """Shut down the Dask client and cluster started for this verifier."""
        if self._client is None:
            return
        client, self._client = self._client, None
        cluster = client.cluster
        client.close()
        if cluster is not None:
            cluster.close()
        log.info("dask cluster closed")

    def run(self) -> Tuple[int, Report]:
        """Exit status (0 pass, 1 failed check) and the report."""
        try:
            report = self.verify()
        finally:
            self.close()
        return (0 if report.passed else 1), report

    # -- subcommands ---------------------------------------------------------

    def _validate(self) -> Report:
        ws = self.workspace
        reports = [check_cw_conditions(v) for v in ws.complexes.values()]
        checks: List[Check] = [Check("parse", Verdict.PASS)]
        for name, r in zip(ws.complexes, reports):
            checks.extend(Check(f"{name}/{c.name}", c.verdict, c.witness, c.note) for c in r.checks)
        return Report("validate", tuple(checks), dict(workspace_summary(ws)))

    def _axioms(self) -> Report:
        space = self.workspace.space(self._need(self.space, "--space"))
        return check_space_axioms(space, self.limits)

    def _continuity(self) -> Report:
        f = self.workspace.map(self._need(self.map_name, "--map"))
        mode = ContinuityMode(self.mode or ContinuityMode.PROXIMAL.value)
        report = check_continuity(f, mode, self.limits)
        if f.is_bijective():
            return merge(
                "continuity",
                [report, check_isomorphism(f, mode, self.limits)],
                map=f.name,
                mode=mode.value,
            )
        return report

    def _fixed(self) -> Report:
        f = self.workspace.map(self._need(self.map_name, "--map"))
        if self.complex_name is not None:
            v = self.workspace.complex(self.complex_name)
            mask = None if self.subset is None else subsets.from_points(self.subset, f.domain.n)
            first = vortex_fixed_point_check(v, f, mask, self.limits)
        else:
            first = fixed_subsets_report(f, limits=self.limits)
        return merge(
            "fixed",
            [first, check_power_semigroup(f, self.limits)],
            **dict(first.data),
        )

    def _conjugacy(self) -> Report:
        f = self.workspace.map(self._need(self.map_name, "--map"))
        g = self.workspace.map(self._need(self.map2, "--map2"))
        mode = ConjugacyMode(self.mode or ConjugacyMode.EXACT.value)
        if self.conjugator is None:
            return search_report(f, g, mode, self.limits)
        h = self.workspace.map(self.conjugator)
        cert = verify_conjugacy(f, g, h, mode, self.limits)
        reports = [cert.report]
        if cert.passed:
            cert, iterates = extend_certificate(cert, f, g, self.iterations, self.limits)
            reports.append(iterates)
            if mode is ConjugacyMode.DESCRIPTIVE:
                reports.append(transfer_fixed_subsets(f, g, h, self.limits))
        return merge("conjugacy", reports, certificate=cert.to_dict())

    def _amenable(self) -> Report:
        ws = self.workspace
        if self.group is not None:
            names = [self.group]
            if self.group not in ws.groups:
                raise ValueError(f"no group named {self.group!r}")
        else:
            names = [
                k
                for k, g in ws.groups.items()
                if self.complex_name is None or g.complex == self.complex_name
            ]
        if not names:
            raise ValueError("amenable needs a declared group (--group)")
        checks: List[Check] = []
        data: Dict[str, Any] = {}
        for name in names:
            decl = ws.groups[name]
            group = vortex_group(ws.complex(decl.complex), decl.basis)
            ok, description = is_amenable_witness(group, limits=self.limits)
            checks.append(Check(f"{name}/uniform-mean", Verdict.PASS if ok else Verdict.FAIL))
            description["moduli"] = list(group.moduli)
            data[name] = description
        return Report("amenable", tuple(checks), data)

    def _render(self) -> Report:
        v = self.workspace.complex(self._need(self.complex_name, "--complex"))
        if self.out is None:
            raise ValueError("render needs --out")
        path = write_svg(v, self.out)
        return Report(
            "render",
            (Check("svg", Verdict.PASS),),
            {
                "complex": v.name,
                "out": str(path),
                "polygons": len(v.cycles),
                "lines": len(v.bridges),
                "circles": len(v.vertices),
            },
        )

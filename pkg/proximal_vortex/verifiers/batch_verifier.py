import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from ..errors import ProximalVortexError
from ..reports import Report
from .workspace_verifier import WorkspaceVerifier

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class JobResult:
    source: str
    status: int
    report: Optional[Report] = None
    error: Optional[str] = None


class BatchVerifier:
    """
    BatchVerifier runs a :class:`WorkspaceVerifier` per job.

    Supports three input modes:
      - CSV-driven: each row defines a job (columns are verifier options)
      - Directory-driven: scan up to `max_depth` for workspace files
      - List-driven: explicit list of workspace paths

    Default options for all jobs may be provided via `default_opts`.
    """

    def __init__(self, *, default_opts: Optional[Dict[str, Any]] = None):
        self.default_opts = default_opts.copy() if default_opts else {}

    def from_csv(self, csv_path: Union[str, Path]) -> List[Dict[str, Any]]:
        """
        Parse a CSV file into a list of job option dicts.

        Empty cells are skipped; values that decode as JSON become native
        Python objects.
        """
        df = pd.read_csv(csv_path, dtype=str).fillna("")
        jobs: List[Dict[str, Any]] = []
        for _, row in df.iterrows():
            opts = self.default_opts.copy()
            for col, val in row.items():
                if not val:
                    continue
                try:
                    parsed = json.loads(val)
                except json.JSONDecodeError:
                    parsed = val
                opts[str(col)] = parsed
            jobs.append(opts)
        return jobs

    def from_directory(
        self,
        directory: Union[str, Path],
        *,
        max_depth: int = 0,
        pattern: str = "*.json",
    ) -> List[Dict[str, Any]]:
        """
        Find workspace files matching `pattern` up to `max_depth` levels down,
        in sorted path order.
        """
        base = Path(directory)
        if not base.is_dir():
            raise ValueError(f"Not a directory: {base}")

        jobs: List[Dict[str, Any]] = []
        for path in sorted(base.rglob(pattern)):
            if not path.is_file():
                continue
            rel = path.relative_to(base)
            if len(rel.parts) - 1 <= max_depth:
                opts = self.default_opts.copy()
                opts["source"] = str(path)
                jobs.append(opts)
        return jobs

    def from_list(self, paths: List[Union[str, Path]]) -> List[Dict[str, Any]]:
        jobs: List[Dict[str, Any]] = []
        for p in paths:
            opts = self.default_opts.copy()
            opts["source"] = str(p)
            jobs.append(opts)
        return jobs

    def run_jobs(self, jobs: List[Dict[str, Any]]) -> List[JobResult]:
        """
        Verify each job; a job that cannot be loaded gets status 2 and a job
        that crashes gets status 3, each with its error instead of a report.
        Processing never stops early.
        """
        results: List[JobResult] = []
        for job in jobs:
            source = job.get("source")
            if not source:
                raise ValueError("Job missing 'source'")
            params = {k: v for k, v in job.items() if k != "source"}
            opts = {**self.default_opts, **params}
            try:
                status, report = WorkspaceVerifier(source=source, **opts).run()
            except (ProximalVortexError, ValueError, KeyError, OSError) as e:
                log.warning("job %s rejected: %s", source, e)
                results.append(JobResult(str(source), 2, error=str(e)))
                continue
            except Exception as e:
                log.exception("job %s crashed", source)
                results.append(JobResult(str(source), 3, error=str(e)))
                continue
            results.append(JobResult(str(source), status, report))
        return results

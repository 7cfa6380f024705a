
"""
Run ONE workspace verification described in a JSON "data_source" file.

- Select the run via --run-index.
- The run MUST have "source" (workspace path) and "subcommand".
- Remaining keys are forwarded to WorkspaceVerifier.
- Appends one row to <out_root>/benchmark_results.csv
"""

import argparse
import csv
import json
import socket
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

import psutil

from proximal_vortex.verifiers import WorkspaceVerifier

FIELDNAMES = [
    "run_id",
    "dataset",
    "subcommand",
    "source",
    "use_cluster",
    "partitions",
    "status",
    "verdict",
    "checks",
    "error",
    "seconds",
    "started_at",
    "ended_at",
    "host",
    "cpu_logical",
    "cpu_physical",
    "mem_total_gb",
]

# Keys handled by this runner
RUNNER_KEYS = {"name", "use_cluster", "source", "subcommand"}


def _verifier_kwargs_from_run(run: Dict[str, Any]) -> Dict[str, Any]:
    kw: Dict[str, Any] = {k: v for k, v in run.items() if k not in RUNNER_KEYS}
    for key in ("iterations", "n_max", "seed", "partitions", "workers"):
        if key in kw and kw[key] is not None:
            kw[key] = int(kw[key])
    if "subset" in kw and kw["subset"] is not None:
        kw["subset"] = [int(v) for v in kw["subset"]]
    return kw


def _write_csv_row(csv_path: Path, row: Dict[str, object]) -> None:
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    exists = csv_path.exists()
    with csv_path.open("a", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=FIELDNAMES)
        if not exists:
            writer.writeheader()
        writer.writerow({k: row.get(k, "") for k in FIELDNAMES})


def _load_runs(path: Path) -> List[Dict[str, Any]]:
    data = json.loads(path.read_text() or "{}")
    runs = data.get("runs") or []
    if not isinstance(runs, list):
        raise ValueError("data_source JSON must contain a top-level 'runs' list.")
    return runs


def run_one(*, run: Dict[str, Any], results_csv: Path) -> Dict[str, object]:
    if not run.get("source") or not run.get("subcommand"):
        raise ValueError("Run must include 'source' and 'subcommand'.")
    source = str(run["source"])
    use_cluster = bool(run.get("use_cluster", False))
    kwargs = _verifier_kwargs_from_run(run)
    kwargs["auto_dask_cluster"] = use_cluster

    run_id = datetime.now().strftime("%Y%m%d_%H%M%S")
    started_at = datetime.now()
    status = "error"
    verdict = ""
    checks = 0
    err_msg = ""

    t0 = time.perf_counter()
    try:
        verifier = WorkspaceVerifier(source=source, subcommand=str(run["subcommand"]), **kwargs)
        report = verifier.verify()
        verdict = report.verdict.value
        checks = len(report.checks)
        status = "ok" if report.passed else "fail"
    except Exception as e:
        err_msg = f"{type(e).__name__}: {e}"
    elapsed = round(time.perf_counter() - t0, 3)

    row: Dict[str, object] = {
        "run_id": run_id,
        "dataset": str(run.get("name", "unnamed")),
        "subcommand": run["subcommand"],
        "source": source,
        "use_cluster": use_cluster,
        "partitions": kwargs.get("partitions", 1),
        "status": status,
        "verdict": verdict,
        "checks": checks,
        "error": err_msg,
        "seconds": elapsed,
        "started_at": started_at.isoformat(timespec="seconds"),
        "ended_at": datetime.now().isoformat(timespec="seconds"),
        "host": socket.gethostname(),
        "cpu_logical": psutil.cpu_count(logical=True) or 0,
        "cpu_physical": psutil.cpu_count(logical=False) or 0,
        "mem_total_gb": round(psutil.virtual_memory().total / (1024**3), 2),
    }
    _write_csv_row(results_csv, row)
    return row


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    p = argparse.ArgumentParser(description="Time a single workspace verification from a JSON data_source.")
    p.add_argument("--data-source", required=True, type=Path,
                   help="Path to JSON file with {'runs':[...]} specs.")
    p.add_argument("--run-index", required=True, type=int,
                   help="Index within data_source.runs to execute (0-based).")
    p.add_argument("--out-root", type=Path, default=Path("./bench_out"),
                   help="Root directory for the results CSV (default: ./bench_out).")
    return p.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> None:
    args = parse_args(argv)
    out_root: Path = args.out_root
    out_root.mkdir(parents=True, exist_ok=True)
    results_csv = out_root / "benchmark_results.csv"

    runs = _load_runs(args.data_source)
    if not (0 <= args.run_index < len(runs)):
        raise IndexError(f"--run-index {args.run_index} out of range (0..{len(runs)-1}).")

    row = run_one(run=runs[args.run_index], results_csv=results_csv)

    print("\n=== Benchmark Summary ===")
    print(f"Wrote 1 row -> {results_csv.resolve()}")
    print(f"Status: {row.get('status')}   Verdict: {row.get('verdict')}   Seconds: {row.get('seconds')}")


if __name__ == "__main__":
    main()

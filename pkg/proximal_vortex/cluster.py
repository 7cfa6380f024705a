import atexit
import logging
import signal
from types import FrameType
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import dask
import psutil
from dask.distributed import Client, LocalCluster

log = logging.getLogger(__name__)

T = TypeVar("T")


class Cluster:
    """
    A local Dask cluster for spreading exhaustive scans across processes.

    Once started, ``dask.compute`` calls made by :func:`partitioned_scan`
    are routed through the returned client.
    """

    def __init__(self, n_workers: int = 4) -> None:
        cpu_count = psutil.cpu_count(logical=False) or n_workers
        self._n_workers = max(1, min(n_workers, cpu_count))
        self._worker_memory = (
            int(psutil.virtual_memory().available * 0.5) // self._n_workers
        )

    @property
    def n_workers(self) -> int:
        return self._n_workers

    def start(self) -> Client:
        """
        Start the Dask LocalCluster and return a Client.
        Registers clean shutdown on exit or SIGINT/SIGTERM.
        """
        cluster = LocalCluster(
            n_workers=self._n_workers,
            memory_limit=self._worker_memory,
            processes=True,
            threads_per_worker=1,
            scheduler_port=0,
        )
        client = Client(cluster)

        def _shutdown(sig: int, frame: FrameType | None = None) -> None:
            client.shutdown()

        atexit.register(client.shutdown)
        signal.signal(signal.SIGTERM, _shutdown)
        signal.signal(signal.SIGINT, _shutdown)

        log.info("dask cluster started: %s (%s)", client, client.dashboard_link)
        return client


def chunk_bounds(start: int, stop: int, partitions: int) -> List[Tuple[int, int]]:
    """Split ``[start, stop)`` into at most ``partitions`` contiguous chunks."""
    total = max(0, stop - start)
    partitions = max(1, min(partitions, total or 1))
    step, extra = divmod(total, partitions)
    bounds: List[Tuple[int, int]] = []
    lo = start
    for i in range(partitions):
        hi = lo + step + (1 if i < extra else 0)
        if hi > lo:
            bounds.append((lo, hi))
        lo = hi
    return bounds


def partitioned_scan(
    func: Callable[[int, int], Sequence[T]],
    start: int,
    stop: int,
    *,
    partitions: int = 1,
    scheduler: Optional[str] = None,
) -> List[T]:
    """
    Evaluate ``func(lo, hi)`` over contiguous chunks of ``[start, stop)``.

    ``func`` must be pure. Chunk results are concatenated in chunk order, so
    the output does not depend on ``partitions``.
    """
    bounds = chunk_bounds(start, stop, partitions)
    if len(bounds) <= 1:
        return [item for lo, hi in bounds for item in func(lo, hi)]

    tasks = [dask.delayed(func)(lo, hi) for lo, hi in bounds]
    log.debug("scanning %d..%d in %d partitions", start, stop, len(tasks))
    kwargs = {} if scheduler is None else {"scheduler": scheduler}
    parts = dask.compute(*tasks, **kwargs)
    return [item for part in parts for item in part]


def first_match(
    func: Callable[[int, int], Optional[T]],
    start: int,
    stop: int,
    *,
    partitions: int = 1,
    scheduler: Optional[str] = None,
) -> Optional[T]:
    """
    First hit of ``func(lo, hi)`` in chunk order.

    Each chunk reports its own first hit; the lowest chunk with a hit wins,
    which matches a sequential scan regardless of partitioning.
    """
    hits = partitioned_scan(
        lambda lo, hi: [func(lo, hi)],
        start,
        stop,
        partitions=partitions,
        scheduler=scheduler,
    )
    for hit in hits:
        if hit is not None:
            return hit
    return None

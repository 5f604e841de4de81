"""Snapshot slot with atomic swap, and the periodic rebuild scheduler.

Readers grab the current SnapshotVersion with a single attribute read, so a
request observes one complete generation; the writer replaces the reference
only after the new snapshot is fully built.  At most one rebuild runs at a
time; a second trigger is rejected, and a failed build leaves the previous
version serving.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass
from typing import Callable

from ..errors import RebuildBusyError
from ..ingest import IdMaps, IngestReport
from ..model import GraphSnapshot

logger = logging.getLogger(__name__)

BuildFn = Callable[[], tuple[GraphSnapshot, "IdMaps | None", "IngestReport | None"]]


@dataclass(frozen=True)
class SnapshotVersion:
    generation: int
    snapshot: GraphSnapshot
    maps: IdMaps | None
    report: IngestReport | None
    built_at: float


@dataclass(frozen=True)
class BuildOutcome:
    ok: bool
    generation: int
    error: str | None
    elapsed_seconds: float


class SnapshotSlot:
    """Holds the serving snapshot; generation strictly increases on success."""

    def __init__(self, build: BuildFn):
        self._build = build
        self._rebuild_lock = threading.Lock()
        self._version: SnapshotVersion | None = None
        self._generation = 0
        self.last_outcome: BuildOutcome | None = None

    @property
    def current(self) -> SnapshotVersion | None:
        return self._version

    @property
    def generation(self) -> int:
        return self._generation

    @property
    def ready(self) -> bool:
        return self._version is not None

    def trigger_rebuild(self) -> int:
        """Run one rebuild; returns the serving generation afterwards.

        Raises RebuildBusyError if a rebuild is already running.  A build
        failure is recorded in `last_outcome` and leaves the slot unchanged.
        """
        return self.rebuild_once().generation

    def rebuild_once(self) -> BuildOutcome:
        if not self._rebuild_lock.acquire(blocking=False):
            raise RebuildBusyError()
        try:
            started = time.perf_counter()
            try:
                snapshot, maps, report = self._build()
            except Exception as exc:
                elapsed = time.perf_counter() - started
                outcome = BuildOutcome(
                    ok=False, generation=self._generation,
                    error=f"{type(exc).__name__}: {exc}", elapsed_seconds=elapsed,
                )
                self.last_outcome = outcome
                logger.error("rebuild failed after %.3fs: %s", elapsed, exc)
                return outcome
            elapsed = time.perf_counter() - started
            generation = self._generation + 1
            version = SnapshotVersion(
                generation=generation,
                snapshot=snapshot,
                maps=maps,
                report=report,
                built_at=time.time(),
            )
            self._version = version  # atomic reference swap; readers never block
            self._generation = generation
            outcome = BuildOutcome(
                ok=True, generation=generation, error=None, elapsed_seconds=elapsed,
            )
            self.last_outcome = outcome
            logger.info(
                "snapshot generation %d serving: %d arcs, built in %.3fs",
                generation, snapshot.count_arcs, elapsed,
            )
            return outcome
        finally:
            self._rebuild_lock.release()


class RebuildScheduler:
    """Single timer loop: build immediately on start, then every interval."""

    def __init__(self, slot: SnapshotSlot, interval_seconds: float):
        self._slot = slot
        self._interval = interval_seconds
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    def start(self) -> None:
        if self._thread is not None:
            return
        self._thread = threading.Thread(target=self._run, name="rebuild-scheduler", daemon=True)
        self._thread.start()

    def _run(self) -> None:
        while True:
            try:
                self._slot.trigger_rebuild()
            except RebuildBusyError:
                logger.info("scheduled rebuild skipped: another rebuild in progress")
            except Exception:
                logger.exception("scheduled rebuild crashed")
            if self._stop.wait(self._interval):
                return

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None

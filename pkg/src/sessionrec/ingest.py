"""Event-log ingestion and the edge-list persistence layer.

Each source file feeds one kernel class.  Raw kernel keys are interned
per class into a dense, globally disjoint KernelId space; raw object keys
are interned into one shared ObjectId space.  The rebuild is always from
scratch: parse, intern, deduplicate, freeze.

Canonical edge-list format: UTF-8 text, one `kernel,object,class` line per
arc (decimal integers), sorted by (kernel, object), LF terminated, no
header.  Interning maps are written beside the edge list as `.kernels.map`
and `.objects.map` CSV sidecars (`interned_id,class_id,raw_key`; the class
column is empty for objects, which carry no class).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigError, EdgeListFormatError
from .model import (
    ClassId,
    GraphBuilder,
    GraphSnapshot,
    KernelClass,
    KernelId,
    ObjectId,
)

logger = logging.getLogger(__name__)

EVENT_FORMATS = ("csv", "jsonl")
CSV_HEADER = ("kernel", "object")


@dataclass(frozen=True)
class SourceSpec:
    """One event source feeding one kernel class."""

    class_id: ClassId
    class_name: str
    kind: str
    weight: int
    path: Path
    format: str

    def __post_init__(self) -> None:
        if self.format not in EVENT_FORMATS:
            raise ConfigError(f"unknown event format {self.format!r} (expected one of {EVENT_FORMATS})")

    def kernel_class(self) -> KernelClass:
        return KernelClass(id=self.class_id, name=self.class_name, kind=self.kind, weight=self.weight)


@dataclass(frozen=True)
class RawEvent:
    raw_kernel_key: str
    raw_object_key: str


@dataclass
class ClassIngestStats:
    events_read: int = 0
    arcs_emitted: int = 0
    duplicates_dropped: int = 0
    malformed_lines: int = 0
    filtered_out: int = 0

    def as_dict(self) -> dict:
        return {
            "events_read": self.events_read,
            "arcs_emitted": self.arcs_emitted,
            "duplicates_dropped": self.duplicates_dropped,
            "malformed_lines": self.malformed_lines,
            "filtered_out": self.filtered_out,
        }


@dataclass
class IngestReport:
    per_class: dict[ClassId, ClassIngestStats] = field(default_factory=dict)
    elapsed_seconds: float = 0.0

    @property
    def events_read(self) -> int:
        return sum(s.events_read for s in self.per_class.values())

    @property
    def arcs_emitted(self) -> int:
        return sum(s.arcs_emitted for s in self.per_class.values())

    @property
    def duplicates_dropped(self) -> int:
        return sum(s.duplicates_dropped for s in self.per_class.values())

    @property
    def malformed_lines(self) -> int:
        return sum(s.malformed_lines for s in self.per_class.values())

    @property
    def filtered_out(self) -> int:
        return sum(s.filtered_out for s in self.per_class.values())

    def as_dict(self) -> dict:
        return {
            "per_class": {str(cid): s.as_dict() for cid, s in sorted(self.per_class.items())},
            "totals": {
                "events_read": self.events_read,
                "arcs_emitted": self.arcs_emitted,
                "duplicates_dropped": self.duplicates_dropped,
                "malformed_lines": self.malformed_lines,
                "filtered_out": self.filtered_out,
            },
            "elapsed_seconds": self.elapsed_seconds,
        }


class IdMaps:
    """Bidirectional raw-key <-> interned-id translation tables."""

    def __init__(
        self,
        kernels: dict[KernelId, tuple[ClassId, str]] | None = None,
        objects: dict[ObjectId, str] | None = None,
    ):
        self.kernels: dict[KernelId, tuple[ClassId, str]] = kernels or {}
        self.objects: dict[ObjectId, str] = objects or {}
        self._kernel_ids = {v: k for k, v in self.kernels.items()}
        self._object_ids = {v: k for k, v in self.objects.items()}

    def intern_kernel(self, class_id: ClassId, raw_key: str) -> KernelId:
        key = (class_id, raw_key)
        interned = self._kernel_ids.get(key)
        if interned is None:
            interned = KernelId(len(self.kernels) + 1)
            self.kernels[interned] = key
            self._kernel_ids[key] = interned
        return interned

    def intern_object(self, raw_key: str) -> ObjectId:
        interned = self._object_ids.get(raw_key)
        if interned is None:
            interned = ObjectId(len(self.objects) + 1)
            self.objects[interned] = raw_key
            self._object_ids[raw_key] = interned
        return interned

    def object_id(self, raw_key: str) -> ObjectId | None:
        return self._object_ids.get(raw_key)

    def raw_object(self, object_id: ObjectId) -> str | None:
        return self.objects.get(object_id)

    @staticmethod
    def sidecar_paths(edge_path: Path) -> tuple[Path, Path]:
        edge_path = Path(edge_path)
        return (
            edge_path.with_name(edge_path.name + ".kernels.map"),
            edge_path.with_name(edge_path.name + ".objects.map"),
        )

    def save(self, edge_path: Path) -> None:
        kernels_path, objects_path = self.sidecar_paths(edge_path)
        with open(kernels_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            for interned in sorted(self.kernels):
                class_id, raw = self.kernels[interned]
                writer.writerow([interned, class_id, raw])
        with open(objects_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            for interned in sorted(self.objects):
                writer.writerow([interned, "", self.objects[interned]])

    @classmethod
    def load(cls, edge_path: Path) -> "IdMaps":
        kernels_path, objects_path = cls.sidecar_paths(edge_path)
        kernels: dict[KernelId, tuple[ClassId, str]] = {}
        objects: dict[ObjectId, str] = {}
        with open(kernels_path, encoding="utf-8", newline="") as fh:
            for row in csv.reader(fh):
                if not row:
                    continue
                kernels[KernelId(int(row[0]))] = (ClassId(int(row[1])), row[2])
        with open(objects_path, encoding="utf-8", newline="") as fh:
            for row in csv.reader(fh):
                if not row:
                    continue
                objects[ObjectId(int(row[0]))] = row[2]
        return cls(kernels=kernels, objects=objects)


@dataclass
class BuildResult:
    snapshot: GraphSnapshot
    report: IngestReport
    maps: IdMaps


def parse_events(spec: SourceSpec) -> tuple[list[RawEvent], int]:
    """Read one source file; returns (events, malformed_line_count).

    Malformed records are counted and skipped, never fatal.  Blank lines
    are ignored entirely.  A CSV first line of exactly `kernel,object` is
    treated as a header.
    """
    if spec.format == "csv":
        return _parse_csv(spec.path)
    if spec.format == "jsonl":
        return _parse_jsonl(spec.path)
    raise ConfigError(f"unknown event format {spec.format!r}")


def _parse_csv(path: Path) -> tuple[list[RawEvent], int]:
    events: list[RawEvent] = []
    malformed = 0
    with open(path, encoding="utf-8", newline="") as fh:
        rows = csv.reader(fh)
        for i, row in enumerate(rows):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if i == 0 and tuple(cell.strip() for cell in row) == CSV_HEADER:
                continue
            if len(row) != 2:
                malformed += 1
                continue
            kernel_key, object_key = row[0].strip(), row[1].strip()
            if not kernel_key or not object_key:
                malformed += 1
                continue
            events.append(RawEvent(kernel_key, object_key))
    return events, malformed


def _parse_jsonl(path: Path) -> tuple[list[RawEvent], int]:
    events: list[RawEvent] = []
    malformed = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                malformed += 1
                continue
            kernel_key = record.get("kernel") if isinstance(record, dict) else None
            object_key = record.get("object") if isinstance(record, dict) else None
            if not isinstance(kernel_key, str) or not isinstance(object_key, str) \
                    or not kernel_key or not object_key:
                malformed += 1
                continue
            events.append(RawEvent(kernel_key, object_key))
    return events, malformed


def build_graph(
    sources: Sequence[SourceSpec],
    valid_objects: set[str] | None = None,
) -> BuildResult:
    """Run the full rebuild: clear, parse, intern, deduplicate, freeze.

    Sources are processed in order, so each class occupies a contiguous,
    disjoint KernelId range.  `valid_objects`, when given, drops events
    whose raw object key is not in the allow-list (counted per class).
    """
    if not sources:
        raise ConfigError("source list must not be empty")
    seen_classes: set[ClassId] = set()
    for spec in sources:
        if spec.class_id in seen_classes:
            raise ConfigError(f"class id {spec.class_id} declared by more than one source")
        seen_classes.add(spec.class_id)

    started = time.perf_counter()
    builder = GraphBuilder(classes=[spec.kernel_class() for spec in sources])
    maps = IdMaps()
    report = IngestReport()

    for spec in sources:
        stats = ClassIngestStats()
        report.per_class[spec.class_id] = stats
        events, malformed = parse_events(spec)
        stats.malformed_lines = malformed
        stats.events_read = len(events) + malformed
        for event in events:
            if valid_objects is not None and event.raw_object_key not in valid_objects:
                stats.filtered_out += 1
                continue
            kernel = maps.intern_kernel(spec.class_id, event.raw_kernel_key)
            obj = maps.intern_object(event.raw_object_key)
            if builder.add_arc(kernel, obj, spec.class_id):
                stats.arcs_emitted += 1
            else:
                stats.duplicates_dropped += 1
        logger.debug(
            "ingested class %d (%s): %d events, %d arcs, %d duplicates, %d malformed",
            spec.class_id, spec.class_name, stats.events_read,
            stats.arcs_emitted, stats.duplicates_dropped, stats.malformed_lines,
        )

    snapshot = builder.freeze()
    report.elapsed_seconds = time.perf_counter() - started
    return BuildResult(snapshot=snapshot, report=report, maps=maps)


def edge_list_bytes(snapshot: GraphSnapshot) -> bytes:
    """Canonical serialization; byte-reproducible for a given snapshot."""
    buf = io.StringIO()
    for arc in snapshot.arcs:  # already sorted by (kernel, object)
        buf.write(f"{arc.kernel},{arc.object},{arc.class_id}\n")
    return buf.getvalue().encode("utf-8")


def save_edge_list(snapshot: GraphSnapshot, sink: Path) -> int:
    """Write the canonical edge list; returns the byte count written."""
    data = edge_list_bytes(snapshot)
    Path(sink).write_bytes(data)
    return len(data)


def load_edge_list(
    source: Path,
    classes: Iterable[KernelClass] | None = None,
) -> GraphSnapshot:
    """Load a canonical edge list and rebuild the snapshot indexes.

    Classes found in the file but absent from the supplied table are
    registered with weight 1.  Duplicate pairs and non-integer fields are
    format errors carrying the line number; a kernel appearing under two
    classes is a partition conflict.
    """
    builder = GraphBuilder(classes=classes or ())
    declared = set(builder.classes)
    with open(source, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.strip().split(",")
            if len(parts) != 3:
                raise EdgeListFormatError(
                    f"expected 3 comma-separated fields, got {len(parts)}", line_no
                )
            try:
                kernel, obj, class_id = (int(p) for p in parts)
            except ValueError:
                raise EdgeListFormatError(f"non-integer field in {line.strip()!r}", line_no) from None
            if kernel < 0 or obj < 0 or class_id < 0:
                raise EdgeListFormatError(f"negative id in {line.strip()!r}", line_no)
            if class_id not in declared:
                builder.declare_class(KernelClass(id=ClassId(class_id), name=f"class_{class_id}", kind="mixed"))
                declared.add(ClassId(class_id))
            inserted = builder.add_arc(KernelId(kernel), ObjectId(obj), ClassId(class_id))
            if not inserted:
                raise EdgeListFormatError(f"duplicate arc ({kernel},{obj})", line_no)
    return builder.freeze()

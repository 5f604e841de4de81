"""Recommendation-session graph model.

The graph is a bipartite directed unigraph: arcs always run kernel -> object,
and a (kernel, object) pair appears at most once.  A kernel is a grouping
entity (an order, a visit, a category, ...) and carries exactly one class;
classes partition the kernel set and hold the per-class recommendation
weight.  The canonical representation is the deduplicated edge list; both
adjacency indexes are derived from it when a builder is frozen.

GraphBuilder is the single mutable accumulator.  GraphSnapshot is immutable
after freeze and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NewType

from .errors import (
    KernelClassConflictError,
    KernelNotFoundError,
    UnknownClassError,
)

ObjectId = NewType("ObjectId", int)
KernelId = NewType("KernelId", int)
ClassId = NewType("ClassId", int)

KERNEL_KINDS = ("behavioural", "static", "mixed")


@dataclass(frozen=True)
class KernelClass:
    """A partition cell of the kernel set.

    `weight` is the per-class arc weight used by weighted scoring; 1 means
    the class contributes plain co-occurrence counts.
    """

    id: ClassId
    name: str
    kind: str = "behavioural"
    weight: int = 1

    def __post_init__(self) -> None:
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"kernel class kind must be one of {KERNEL_KINDS}, got {self.kind!r}")
        if self.weight < 1:
            raise ValueError(f"kernel class weight must be >= 1, got {self.weight}")
        if self.id < 0:
            raise ValueError(f"class id must be non-negative, got {self.id}")


@dataclass(frozen=True, slots=True)
class Arc:
    """One directed kernel -> object edge, tagged with the kernel's class."""

    kernel: KernelId
    object: ObjectId
    class_id: ClassId


@dataclass(frozen=True)
class Session:
    """The star subgraph of one kernel: the kernel plus every adjacent object."""

    kernel: KernelId
    objects: tuple[ObjectId, ...]
    arcs: tuple[Arc, ...]


@dataclass(frozen=True)
class ClassStats:
    kernels: int
    objects: int


@dataclass(frozen=True)
class GraphStats:
    objects: int
    kernels: int
    nodes: int
    arcs: int
    classes: int
    per_class: dict[ClassId, ClassStats]

    def as_dict(self) -> dict:
        return {
            "objects": self.objects,
            "kernels": self.kernels,
            "nodes": self.nodes,
            "arcs": self.arcs,
            "classes": self.classes,
            "per_class": {
                str(cid): {"kernels": cs.kernels, "objects": cs.objects}
                for cid, cs in sorted(self.per_class.items())
            },
        }


@dataclass(frozen=True)
class ValidationReport:
    """Constraint violations found in a snapshot.  Violations are data, not errors."""

    ok: bool
    orphan_kernels: tuple[KernelId, ...]
    orphan_objects: tuple[ObjectId, ...]
    undeclared_classes: tuple[ClassId, ...]

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "orphan_kernels": list(self.orphan_kernels),
            "orphan_objects": list(self.orphan_objects),
            "undeclared_classes": list(self.undeclared_classes),
        }


class GraphBuilder:
    """Accumulates arcs with (kernel, object) dedup and per-kernel class checks.

    Duplicate pairs are dropped (counted, not errors).  An arc whose kernel
    was previously seen under a different class is rejected, keeping the
    class partition intact.  Kernels and objects may also be declared
    without arcs so validation can report them as orphans.
    """

    def __init__(self, classes: Iterable[KernelClass] = ()):
        self._classes: dict[ClassId, KernelClass] = {}
        self._kernel_class: dict[KernelId, ClassId] = {}
        self._objects: set[ObjectId] = set()
        self._arcs: dict[tuple[KernelId, ObjectId], ClassId] = {}
        self.duplicates_dropped = 0
        for kc in classes:
            self.declare_class(kc)

    @property
    def classes(self) -> dict[ClassId, KernelClass]:
        return dict(self._classes)

    @property
    def arc_count(self) -> int:
        return len(self._arcs)

    def declare_class(self, kernel_class: KernelClass) -> None:
        existing = self._classes.get(kernel_class.id)
        if existing is not None and existing != kernel_class:
            raise ValueError(f"class id {kernel_class.id} already declared as {existing}")
        self._classes[kernel_class.id] = kernel_class

    def declare_kernel(self, kernel: KernelId, class_id: ClassId) -> None:
        """Register a kernel in the universe without requiring an arc."""
        if class_id not in self._classes:
            raise UnknownClassError(class_id)
        existing = self._kernel_class.get(kernel)
        if existing is not None and existing != class_id:
            raise KernelClassConflictError(kernel, existing, class_id)
        self._kernel_class[kernel] = class_id

    def declare_object(self, object_id: ObjectId) -> None:
        self._objects.add(object_id)

    def add_arc(self, kernel: KernelId, object_id: ObjectId, class_id: ClassId) -> bool:
        """Insert one arc; returns True iff the (kernel, object) pair was new."""
        if class_id not in self._classes:
            raise UnknownClassError(class_id)
        existing_class = self._kernel_class.get(kernel)
        if existing_class is not None and existing_class != class_id:
            raise KernelClassConflictError(kernel, existing_class, class_id)
        pair = (kernel, object_id)
        if pair in self._arcs:
            self.duplicates_dropped += 1
            return False
        self._kernel_class[kernel] = class_id
        self._objects.add(object_id)
        self._arcs[pair] = class_id
        return True

    def freeze(self) -> GraphSnapshot:
        """Build the immutable snapshot with both adjacency indexes; resets the builder.

        Declared classes are kept across freezes (they are configuration);
        arcs, nodes and the duplicate counter are cleared.
        """
        arcs = tuple(
            Arc(kernel, obj, class_id)
            for (kernel, obj), class_id in sorted(self._arcs.items())
        )
        kernel_index: dict[KernelId, tuple[ObjectId, ...]] = {}
        object_index: dict[ObjectId, tuple[KernelId, ...]] = {}
        by_kernel: dict[KernelId, list[ObjectId]] = {}
        by_object: dict[ObjectId, list[KernelId]] = {}
        for arc in arcs:
            by_kernel.setdefault(arc.kernel, []).append(arc.object)
            by_object.setdefault(arc.object, []).append(arc.kernel)
        for kernel, objs in by_kernel.items():
            kernel_index[kernel] = tuple(objs)  # arcs already sorted by (kernel, object)
        for obj, kernels in by_object.items():
            object_index[obj] = tuple(sorted(kernels))

        snapshot = GraphSnapshot(
            arcs=arcs,
            classes=dict(self._classes),
            kernel_class=dict(self._kernel_class),
            objects=tuple(sorted(self._objects)),
            kernels=tuple(sorted(self._kernel_class)),
            kernel_index=kernel_index,
            object_index=object_index,
        )
        self._kernel_class.clear()
        self._objects.clear()
        self._arcs.clear()
        self.duplicates_dropped = 0
        return snapshot


@dataclass(frozen=True)
class GraphSnapshot:
    """Immutable edge-list store with derived adjacency indexes.

    `objects` and `kernels` are the node universes (sorted); they may exceed
    the arc endpoints when nodes were declared without arcs, which validate()
    reports as orphans.  All adjacency lists are ascending by id.
    """

    arcs: tuple[Arc, ...]
    classes: dict[ClassId, KernelClass]
    kernel_class: dict[KernelId, ClassId]
    objects: tuple[ObjectId, ...]
    kernels: tuple[KernelId, ...]
    kernel_index: dict[KernelId, tuple[ObjectId, ...]]
    object_index: dict[ObjectId, tuple[KernelId, ...]]

    @property
    def count_objects(self) -> int:
        return len(self.objects)

    @property
    def count_kernels(self) -> int:
        return len(self.kernels)

    @property
    def count_nodes(self) -> int:
        return len(self.objects) + len(self.kernels)

    @property
    def count_arcs(self) -> int:
        return len(self.arcs)

    @property
    def count_elements(self) -> int:
        """Nodes plus arcs: the graph size measure used by the benchmarks."""
        return self.count_nodes + self.count_arcs

    def kernels_of(self, object_id: ObjectId) -> tuple[KernelId, ...]:
        """Kernels with an arc into the object, ascending; empty if unknown."""
        return self.object_index.get(object_id, ())

    def objects_of(self, kernel: KernelId) -> tuple[ObjectId, ...]:
        """Objects the kernel points at, ascending; empty if unknown."""
        return self.kernel_index.get(kernel, ())

    def class_of(self, kernel: KernelId) -> ClassId:
        try:
            return self.kernel_class[kernel]
        except KeyError:
            raise KernelNotFoundError(kernel) from None

    def weight_of(self, kernel: KernelId) -> int:
        class_id = self.class_of(kernel)
        kc = self.classes.get(class_id)
        if kc is None:
            raise UnknownClassError(class_id)
        return kc.weight

    def session_of(self, kernel: KernelId) -> Session:
        """The kernel's star subgraph: exactly its adjacent objects and arcs."""
        if kernel not in self.kernel_class:
            raise KernelNotFoundError(kernel)
        class_id = self.kernel_class[kernel]
        objects = self.kernel_index.get(kernel, ())
        arcs = tuple(Arc(kernel, obj, class_id) for obj in objects)
        return Session(kernel=kernel, objects=objects, arcs=arcs)

    def iter_sessions(self) -> Iterator[Session]:
        for kernel in self.kernels:
            yield self.session_of(kernel)

    def stats(self) -> GraphStats:
        per_class_kernels: dict[ClassId, int] = {cid: 0 for cid in self.classes}
        for class_id in self.kernel_class.values():
            per_class_kernels[class_id] = per_class_kernels.get(class_id, 0) + 1
        per_class_objects: dict[ClassId, set[ObjectId]] = {}
        for arc in self.arcs:
            per_class_objects.setdefault(arc.class_id, set()).add(arc.object)
        referenced = set(per_class_kernels) | set(per_class_objects)
        per_class = {
            cid: ClassStats(
                kernels=per_class_kernels.get(cid, 0),
                objects=len(per_class_objects.get(cid, ())),
            )
            for cid in referenced
        }
        return GraphStats(
            objects=self.count_objects,
            kernels=self.count_kernels,
            nodes=self.count_nodes,
            arcs=self.count_arcs,
            classes=len(self.classes),
            per_class=per_class,
        )

    def validate(self) -> ValidationReport:
        """Check the model constraints: no orphan kernels/objects, all classes declared."""
        orphan_kernels = tuple(k for k in self.kernels if k not in self.kernel_index)
        orphan_objects = tuple(o for o in self.objects if o not in self.object_index)
        undeclared = tuple(
            sorted({cid for cid in self.kernel_class.values() if cid not in self.classes})
        )
        ok = not orphan_kernels and not orphan_objects and not undeclared
        return ValidationReport(
            ok=ok,
            orphan_kernels=orphan_kernels,
            orphan_objects=orphan_objects,
            undeclared_classes=undeclared,
        )

"""Synthetic graph generation and the build/query scaling benchmark.

The generator emits raw events for graphs with exact object, kernel and
arc counts that always satisfy the model constraints (every kernel gets at
least one object, every object at least one kernel).  Kernel degrees
average arcs/kernels; objects are drawn from a skewed (zipf-like)
popularity distribution.  Everything is deterministic for a given seed.
"""

from __future__ import annotations

import csv
import io
import logging
import random
import tempfile
import time
from dataclasses import dataclass
from itertools import accumulate
from pathlib import Path
from typing import Sequence

from . import engine
from .errors import ConfigError
from .ingest import BuildResult, SourceSpec, build_graph
from .model import ClassId, KernelClass

logger = logging.getLogger(__name__)

DEFAULT_ARCS_PER_KERNEL = 1.8
DEFAULT_OBJECT_FRACTION = 0.011
DEFAULT_ZIPF_EXPONENT = 1.0


@dataclass(frozen=True)
class SyntheticSpec:
    """Exact target counts for one synthetic graph."""

    num_objects: int
    num_kernels: int
    num_arcs: int

    @property
    def elements(self) -> int:
        return self.num_objects + self.num_kernels + self.num_arcs

    def __post_init__(self) -> None:
        if self.num_objects < 1 or self.num_kernels < 1:
            raise ValueError("need at least one object and one kernel")
        if self.num_arcs < max(self.num_objects, self.num_kernels):
            raise ValueError("num_arcs too small to cover every object and kernel")
        if self.num_arcs > self.num_objects * self.num_kernels:
            raise ValueError("num_arcs exceeds the bipartite maximum")


@dataclass(frozen=True)
class BenchPoint:
    elements: int
    build_seconds: float
    mean_query_seconds: float


def plan_size(
    target_elements: int,
    arcs_per_kernel: float = DEFAULT_ARCS_PER_KERNEL,
    object_fraction: float = DEFAULT_OBJECT_FRACTION,
) -> SyntheticSpec:
    """Split a target element count (nodes + arcs) into exact set sizes.

    Defaults keep arcs/kernels near 1.8 with a small object set, the shape
    of a store catalog fanned out over many short sessions.
    """
    if target_elements < 3:
        raise ValueError("target must allow at least 1 object, 1 kernel, 1 arc")
    num_objects = max(1, round(target_elements * object_fraction))
    num_kernels = max(1, round((target_elements - num_objects) / (1.0 + arcs_per_kernel)))
    num_arcs = target_elements - num_objects - num_kernels
    num_arcs = max(num_arcs, num_objects, num_kernels)
    num_arcs = min(num_arcs, num_objects * num_kernels)
    return SyntheticSpec(num_objects, num_kernels, num_arcs)


def synthesize_events(spec: SyntheticSpec, seed: int, zipf_exponent: float = DEFAULT_ZIPF_EXPONENT) -> list[tuple[str, str]]:
    """Generate (kernel_key, object_key) events realizing the spec exactly.

    No (kernel, object) pair repeats, so the arc count survives dedup.
    """
    rng = random.Random(seed)
    num_o, num_j, num_e = spec.num_objects, spec.num_kernels, spec.num_arcs

    # Per-kernel degrees: one guaranteed arc each, extras spread at random.
    degrees = [1] * num_j
    eligible = list(range(num_j)) if num_o > 1 else []
    for _ in range(num_e - num_j):
        idx = rng.randrange(len(eligible))
        j = eligible[idx]
        degrees[j] += 1
        if degrees[j] >= num_o:
            eligible[idx] = eligible[-1]
            eligible.pop()

    # Popularity: zipf-like weights over a shuffled object order.
    order = list(range(num_o))
    rng.shuffle(order)
    weights = [0.0] * num_o
    for rank, obj in enumerate(order):
        weights[obj] = 1.0 / (rank + 1) ** zipf_exponent
    cum_weights = list(accumulate(weights))

    # Coverage pass: every object lands in some kernel slot first.
    slots: list[int] = []
    for j, d in enumerate(degrees):
        slots.extend([j] * d)
    rng.shuffle(slots)
    used: list[set[int]] = [set() for _ in range(num_j)]
    cover_objects = list(range(num_o))
    rng.shuffle(cover_objects)
    for obj, j in zip(cover_objects, slots[:num_o]):
        used[j].add(obj)

    # Fill the remaining degree budget with popularity-weighted draws.
    objects_universe = list(range(num_o))
    for j in range(num_j):
        need = degrees[j] - len(used[j])
        for _ in range(need):
            picked = None
            for _attempt in range(32):
                candidate = rng.choices(objects_universe, cum_weights=cum_weights, k=1)[0]
                if candidate not in used[j]:
                    picked = candidate
                    break
            if picked is None:  # dense kernel: fall back to the first unused object
                picked = next(o for o in objects_universe if o not in used[j])
            used[j].add(picked)

    events = [(f"k{j}", f"o{obj}") for j in range(num_j) for obj in sorted(used[j])]
    rng.shuffle(events)
    return events


def write_source_files(
    events: Sequence[tuple[str, str]],
    directory: Path,
    classes: Sequence[KernelClass] | None = None,
    seed: int = 0,
) -> list[SourceSpec]:
    """Write events as per-class CSV sources; kernels are assigned to classes at random."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if classes is None or len(classes) == 0:
        classes = [KernelClass(id=ClassId(1), name="events", kind="behavioural")]
    rng = random.Random(seed)
    kernel_classes: dict[str, int] = {}
    buckets: list[list[tuple[str, str]]] = [[] for _ in classes]
    for kernel_key, object_key in events:
        slot = kernel_classes.get(kernel_key)
        if slot is None:
            slot = rng.randrange(len(classes))
            kernel_classes[kernel_key] = slot
        buckets[slot].append((kernel_key, object_key))

    specs: list[SourceSpec] = []
    for kc, bucket in zip(classes, buckets):
        path = directory / f"class_{kc.id}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerows(bucket)
        specs.append(
            SourceSpec(
                class_id=kc.id,
                class_name=kc.name,
                kind=kc.kind,
                weight=kc.weight,
                path=path,
                format="csv",
            )
        )
    return specs


def build_synthetic(
    spec: SyntheticSpec,
    seed: int,
    directory: Path,
    classes: Sequence[KernelClass] | None = None,
    zipf_exponent: float = DEFAULT_ZIPF_EXPONENT,
) -> BuildResult:
    """Generate events for the spec, write source files and run a full build."""
    events = synthesize_events(spec, seed, zipf_exponent)
    sources = write_source_files(events, directory, classes, seed=seed)
    return build_graph(sources)


def scaling_bench(
    size_steps: Sequence[int],
    generator_seed: int,
    repetitions: int = 1,
    query_samples: int = 100,
    workdir: Path | None = None,
) -> list[BenchPoint]:
    """Measure build wall time and mean single-object query latency per size step.

    Build time is averaged over `repetitions` rebuilds of the same sources;
    query latency over `query_samples` random anchors.
    """
    steps = list(size_steps)
    if not steps:
        raise ConfigError("need at least one size step")
    if any(b <= a for a, b in zip(steps, steps[1:])):
        raise ConfigError("size steps must be strictly increasing")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")

    series: list[BenchPoint] = []
    with tempfile.TemporaryDirectory(prefix="sessionrec-bench-") as tmp:
        base = Path(workdir) if workdir is not None else Path(tmp)
        for index, target in enumerate(steps):
            spec = plan_size(target)
            step_seed = generator_seed * 1_000_003 + index
            events = synthesize_events(spec, step_seed)
            sources = write_source_files(events, base / f"step_{target}", seed=step_seed)

            build_times = []
            result = None
            for _ in range(repetitions):
                t0 = time.perf_counter()
                result = build_graph(sources)
                build_times.append(time.perf_counter() - t0)
            assert result is not None
            snapshot = result.snapshot

            rng = random.Random(step_seed)
            anchors = [rng.choice(snapshot.objects) for _ in range(query_samples)]
            t0 = time.perf_counter()
            for anchor in anchors:
                engine.recommend(snapshot, anchor)
            mean_query = (time.perf_counter() - t0) / max(1, len(anchors))

            point = BenchPoint(
                elements=snapshot.count_elements,
                build_seconds=sum(build_times) / len(build_times),
                mean_query_seconds=mean_query,
            )
            logger.info(
                "bench step %d: %d elements, build %.4fs, query %.6fs",
                index, point.elements, point.build_seconds, point.mean_query_seconds,
            )
            series.append(point)
    return series


def bench_csv(series: Sequence[BenchPoint], header: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(["elements", "build_seconds", "mean_query_seconds"])
    for point in series:
        writer.writerow([point.elements, f"{point.build_seconds:.6f}", f"{point.mean_query_seconds:.6f}"])
    return buf.getvalue()


def write_bench_csv(series: Sequence[BenchPoint], sink: Path) -> None:
    Path(sink).write_text(bench_csv(series, header=True), encoding="utf-8")

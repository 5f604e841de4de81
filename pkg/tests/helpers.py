"""Shared test scaffolding: the brute-force oracle and random graph corpora.

The oracle works directly on raw (kernel, object, class) triples and never
touches the snapshot indexes, so it stays an independent check of the
engine's results.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass

from sessionrec.model import ClassId, GraphBuilder, GraphSnapshot, KernelClass, KernelId, ObjectId

KINDS = ("behavioural", "static", "mixed")


def brute_force_vector(raw_arcs, seeds, weights=None, limit=None):
    """Reference ranking by raw arc-list scanning.

    raw_arcs: (kernel, object, class_id) triples, duplicates allowed.
    seeds: anchor objects, excluded from the output.
    weights: class_id -> weight; None counts every shared kernel as 1.
    Returns [(object, score), ...] sorted by score desc, then object asc.
    """
    pairs = set()
    kernels_of = defaultdict(set)
    kernel_class = {}
    for kernel, obj, class_id in raw_arcs:
        if (kernel, obj) in pairs:
            continue
        pairs.add((kernel, obj))
        kernels_of[obj].add(kernel)
        kernel_class[kernel] = class_id

    seed_set = set(seeds)
    pool = set()
    for seed in seed_set:
        pool |= kernels_of[seed]

    scores = {}
    for obj, kernels in kernels_of.items():
        if obj in seed_set:
            continue
        shared = pool & kernels
        if not shared:
            continue
        if weights is None:
            scores[obj] = len(shared)
        else:
            scores[obj] = sum(weights[kernel_class[k]] for k in shared)

    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    if limit is not None:
        ordered = ordered[:limit]
    return ordered


@dataclass
class GraphCase:
    """One randomly drawn graph: raw arcs plus its class table."""

    seed: int
    raw_arcs: list[tuple[int, int, int]]
    classes: list[KernelClass]

    def weights(self, factor: int = 1) -> dict[int, int]:
        return {kc.id: kc.weight * factor for kc in self.classes}


def random_graph_case(seed: int, max_kernels: int = 50, max_objects: int = 30,
                      max_classes: int = 4, max_weight: int = 5) -> GraphCase:
    """Draw a random bipartite graph; every kernel gets at least one object."""
    rng = random.Random(seed)
    num_classes = rng.randint(1, max_classes)
    classes = [
        KernelClass(
            id=ClassId(cid),
            name=f"c{cid}",
            kind=rng.choice(KINDS),
            weight=rng.randint(1, max_weight),
        )
        for cid in range(1, num_classes + 1)
    ]
    num_kernels = rng.randint(1, max_kernels)
    num_objects = rng.randint(1, max_objects)
    raw_arcs = []
    for kernel in range(1, num_kernels + 1):
        class_id = rng.randint(1, num_classes)
        degree = rng.randint(1, min(4, num_objects))
        for obj in rng.sample(range(1, num_objects + 1), degree):
            raw_arcs.append((kernel, obj, class_id))
    rng.shuffle(raw_arcs)
    return GraphCase(seed=seed, raw_arcs=raw_arcs, classes=classes)


def snapshot_from_case(case: GraphCase, weight_factor: int = 1,
                       unit_weights: bool = False) -> GraphSnapshot:
    """Build a snapshot from a case, optionally rescaling or flattening weights."""
    classes = []
    for kc in case.classes:
        weight = 1 if unit_weights else kc.weight * weight_factor
        classes.append(KernelClass(id=kc.id, name=kc.name, kind=kc.kind, weight=weight))
    builder = GraphBuilder(classes=classes)
    for kernel, obj, class_id in case.raw_arcs:
        builder.add_arc(KernelId(kernel), ObjectId(obj), ClassId(class_id))
    return builder.freeze()


def snapshot_from_arcs(raw_arcs, classes) -> GraphSnapshot:
    builder = GraphBuilder(classes=classes)
    for kernel, obj, class_id in raw_arcs:
        builder.add_arc(KernelId(kernel), ObjectId(obj), ClassId(class_id))
    return builder.freeze()

"""Object-to-object recommendation over a graph snapshot.

The ranking signal for a candidate object is its incoming degree inside the
anchor's two-step neighborhood: the number of kernels shared with the anchor.
Weighted scoring replaces each shared kernel's contribution of 1 with its
class weight, so all-ones weights reproduce the plain counts.  The multi-seed
variant pools the kernels of every seed (as a set) and sums contributions
over that pool, excluding the seeds themselves from the output.

All functions are pure reads of an immutable snapshot and can run
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import ObjectNotFoundError
from .model import Arc, GraphSnapshot, KernelId, ObjectId


class ScoredObject(NamedTuple):
    object: ObjectId
    score: int


RecommendationVector = list[ScoredObject]


@dataclass(frozen=True)
class Subgraph:
    """A node-induced piece of the graph; all lists ascending by id."""

    kernels: tuple[KernelId, ...]
    objects: tuple[ObjectId, ...]
    arcs: tuple[Arc, ...]


def _anchor_kernels(snapshot: GraphSnapshot, m: ObjectId) -> tuple[KernelId, ...]:
    kernels = snapshot.kernels_of(m)
    if not kernels:
        raise ObjectNotFoundError(m)
    return kernels


def neighborhood_first(snapshot: GraphSnapshot, m: ObjectId) -> Subgraph:
    """The anchor object, its kernels, and exactly the arcs between them."""
    kernels = _anchor_kernels(snapshot, m)
    arcs = tuple(Arc(k, m, snapshot.kernel_class[k]) for k in kernels)
    return Subgraph(kernels=kernels, objects=(m,), arcs=arcs)


def neighborhood_second(snapshot: GraphSnapshot, m: ObjectId) -> Subgraph:
    """The first neighborhood widened by every object its kernels reach."""
    kernels = _anchor_kernels(snapshot, m)
    objects: set[ObjectId] = set()
    arcs: list[Arc] = []
    for k in kernels:
        class_id = snapshot.kernel_class[k]
        for obj in snapshot.objects_of(k):
            objects.add(obj)
            arcs.append(Arc(k, obj, class_id))
    arcs.sort(key=lambda a: (a.kernel, a.object))
    return Subgraph(kernels=kernels, objects=tuple(sorted(objects)), arcs=tuple(arcs))


def _pool_scores(
    snapshot: GraphSnapshot,
    pool: Iterable[KernelId],
    excluded: set[ObjectId],
    use_weights: bool,
) -> dict[ObjectId, int]:
    scores: dict[ObjectId, int] = {}
    for k in pool:
        step = snapshot.weight_of(k) if use_weights else 1
        for obj in snapshot.objects_of(k):
            if obj in excluded:
                continue
            scores[obj] = scores.get(obj, 0) + step
    return scores


def score_in_degrees(
    snapshot: GraphSnapshot, m: ObjectId, use_weights: bool = False
) -> dict[ObjectId, int]:
    """Score every object sharing a kernel with the anchor; the anchor is excluded.

    Unweighted, the score is the candidate's incoming degree within the
    second neighborhood (= count of shared kernels).
    """
    kernels = _anchor_kernels(snapshot, m)
    return _pool_scores(snapshot, kernels, {m}, use_weights)


def _sorted_vector(scores: dict[ObjectId, int], limit: int | None) -> RecommendationVector:
    if limit is not None and limit < 0:
        raise ValueError(f"limit must be a non-negative integer, got {limit}")
    ordered = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    if limit is not None:
        ordered = ordered[:limit]
    return [ScoredObject(obj, score) for obj, score in ordered]


def recommend(
    snapshot: GraphSnapshot,
    m: ObjectId,
    limit: int | None = None,
    use_weights: bool = False,
) -> RecommendationVector:
    """Rank candidates by score descending, ties broken by ascending object id.

    Objects with no shared kernel never appear (a zero score is never
    emitted).  `limit` truncates after the full sort; None returns the
    whole vector.
    """
    return _sorted_vector(score_in_degrees(snapshot, m, use_weights), limit)


def recommend_for_path(
    snapshot: GraphSnapshot,
    seeds: Sequence[ObjectId],
    limit: int | None = None,
    use_weights: bool = False,
) -> RecommendationVector:
    """Recommend for a browsing path: pool the kernels of all seeds, sum over the pool.

    Every seed is excluded from the output.  With a single seed this equals
    recommend().  Duplicate seeds are collapsed; an empty path is invalid.
    """
    if not seeds:
        raise ValueError("seed set must not be empty")
    seen: set[ObjectId] = set()
    distinct: list[ObjectId] = []
    for s in seeds:
        if s not in seen:
            seen.add(s)
            distinct.append(s)
    pool: set[KernelId] = set()
    for s in distinct:
        pool.update(_anchor_kernels(snapshot, s))
    scores = _pool_scores(snapshot, sorted(pool), seen, use_weights)
    return _sorted_vector(scores, limit)

"""Effectiveness metric and log-replay evaluation.

A recommendation is effective when the user actually moved to one of the
recommended objects.  Effectiveness is the percentage of effective
recommendations among all issued ones; an empty denominator yields 0.0.
Reported percentages are rounded half-up to two decimals.
"""

from __future__ import annotations

import csv
import json
import logging
import random
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Callable, Sequence

from . import engine
from .engine import RecommendationVector, ScoredObject
from .model import GraphSnapshot, ObjectId

logger = logging.getLogger(__name__)

LOG_HEADER = ("visit_key", "anchor", "followed")

Recommender = Callable[[GraphSnapshot, ObjectId, int], RecommendationVector]


@dataclass(frozen=True)
class LogEntry:
    """One recommendation opportunity: the anchor shown and the object followed next, if any."""

    visit_key: str
    anchor: ObjectId
    followed: ObjectId | None = None
    day: str | None = None


@dataclass
class DayStats:
    issued: int = 0
    effective: int = 0

    @property
    def effectiveness_pct(self) -> float:
        return round_pct(effectiveness(self.effective, self.issued))


@dataclass
class EvalReport:
    issued: int = 0
    effective: int = 0
    skipped_missing_anchor: int = 0
    per_day: dict[str, DayStats] = field(default_factory=dict)

    @property
    def effectiveness_pct(self) -> float:
        return round_pct(effectiveness(self.effective, self.issued))

    def as_dict(self) -> dict:
        out: dict = {
            "issued": self.issued,
            "effective": self.effective,
            "effectiveness_pct": self.effectiveness_pct,
            "skipped_missing_anchor": self.skipped_missing_anchor,
        }
        if self.per_day:
            out["per_day"] = {
                day: {
                    "issued": s.issued,
                    "effective": s.effective,
                    "effectiveness_pct": s.effectiveness_pct,
                }
                for day, s in sorted(self.per_day.items())
            }
        return out

    def to_json_line(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    def format_text(self) -> str:
        lines = [
            f"recommendations issued: {self.issued}",
            f"effective:              {self.effective}",
            f"effectiveness:          {self.effectiveness_pct:.2f}%",
        ]
        if self.skipped_missing_anchor:
            lines.append(f"skipped (anchor not in graph): {self.skipped_missing_anchor}")
        for day, s in sorted(self.per_day.items()):
            lines.append(f"  {day}: {s.effective}/{s.issued} = {s.effectiveness_pct:.2f}%")
        return "\n".join(lines)


def effectiveness(effective: int, total: int) -> float:
    """Percentage of effective recommendations; 0.0 when nothing was issued."""
    if effective < 0 or total < 0:
        raise ValueError("counts must be non-negative")
    if effective > total:
        raise ValueError(f"effective ({effective}) cannot exceed total ({total})")
    if total == 0:
        return 0.0
    return 100.0 * effective / total


def round_pct(value: float, ndigits: int = 2) -> float:
    """Round half-up, the convention used for reported percentages."""
    quantum = Decimal(1).scaleb(-ndigits)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def replay_evaluate(
    snapshot: GraphSnapshot,
    log: Sequence[LogEntry],
    limit: int,
    use_weights: bool = False,
    recommender: Recommender | None = None,
) -> EvalReport:
    """Replay a log: issue a top-`limit` recommendation per entry, count hits.

    An entry is effective iff it has a followed object and that object
    appears anywhere in the issued (possibly truncated) vector.  Entries
    whose anchor is missing from the snapshot are still counted as issued
    but can never be effective; they increment the skip counter.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if recommender is None:
        def recommender(snap: GraphSnapshot, anchor: ObjectId, top: int) -> RecommendationVector:
            return engine.recommend(snap, anchor, limit=top, use_weights=use_weights)

    report = EvalReport()
    for entry in log:
        report.issued += 1
        day_stats = None
        if entry.day is not None:
            day_stats = report.per_day.setdefault(entry.day, DayStats())
            day_stats.issued += 1
        if not snapshot.kernels_of(entry.anchor):
            report.skipped_missing_anchor += 1
            logger.warning("anchor %s not in snapshot; entry %s skipped", entry.anchor, entry.visit_key)
            continue
        if entry.followed is None:
            continue
        vector = recommender(snapshot, entry.anchor, limit)
        if any(item.object == entry.followed for item in vector):
            report.effective += 1
            if day_stats is not None:
                day_stats.effective += 1
    return report


def random_baseline(
    snapshot: GraphSnapshot,
    anchor: ObjectId,
    limit: int,
    seed: int,
) -> RecommendationVector:
    """Uniformly sampled distinct objects (anchor excluded), all scored 0.

    A limit beyond the population size returns every other object.
    Deterministic for a given seed.
    """
    if limit < 0:
        raise ValueError(f"limit must be non-negative, got {limit}")
    population = [o for o in snapshot.objects if o != anchor]
    rng = random.Random(seed)
    k = min(limit, len(population))
    return [ScoredObject(obj, 0) for obj in rng.sample(population, k)]


def load_interaction_log(path: Path) -> list[LogEntry]:
    """Read a `visit_key,anchor,followed[,day]` CSV; a matching header line is skipped."""
    entries: list[LogEntry] = []
    with open(path, encoding="utf-8", newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if i == 0 and tuple(c.strip() for c in row[:3]) == LOG_HEADER:
                continue
            if len(row) < 3 or len(row) > 4:
                raise ValueError(f"line {i + 1}: expected 3 or 4 columns, got {len(row)}")
            followed = row[2].strip()
            entries.append(
                LogEntry(
                    visit_key=row[0].strip(),
                    anchor=ObjectId(int(row[1])),
                    followed=ObjectId(int(followed)) if followed else None,
                    day=row[3].strip() if len(row) == 4 and row[3].strip() else None,
                )
            )
    return entries

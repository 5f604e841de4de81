"""Session-graph recommendation engine.

Build a bipartite kernel -> object co-occurrence graph from e-commerce
event logs, rank related objects by shared-kernel counts (optionally
class-weighted, optionally over a multi-object browsing path), evaluate
effectiveness by log replay, and serve it all behind a rebuildable
snapshot.
"""

from .engine import (
    RecommendationVector,
    ScoredObject,
    Subgraph,
    neighborhood_first,
    neighborhood_second,
    recommend,
    recommend_for_path,
    score_in_degrees,
)
from .errors import (
    ConfigError,
    EdgeListFormatError,
    KernelClassConflictError,
    KernelNotFoundError,
    ObjectNotFoundError,
    RebuildBusyError,
    SessionRecError,
    UnknownClassError,
)
from .evaluate import EvalReport, LogEntry, effectiveness, random_baseline, replay_evaluate
from .ingest import (
    BuildResult,
    IdMaps,
    IngestReport,
    RawEvent,
    SourceSpec,
    build_graph,
    load_edge_list,
    parse_events,
    save_edge_list,
)
from .model import (
    Arc,
    ClassId,
    GraphBuilder,
    GraphSnapshot,
    GraphStats,
    KernelClass,
    KernelId,
    ObjectId,
    Session,
    ValidationReport,
)

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "BuildResult",
    "ClassId",
    "ConfigError",
    "EdgeListFormatError",
    "EvalReport",
    "GraphBuilder",
    "GraphSnapshot",
    "GraphStats",
    "IdMaps",
    "IngestReport",
    "KernelClass",
    "KernelClassConflictError",
    "KernelId",
    "KernelNotFoundError",
    "LogEntry",
    "ObjectId",
    "ObjectNotFoundError",
    "RawEvent",
    "RebuildBusyError",
    "RecommendationVector",
    "ScoredObject",
    "Session",
    "SessionRecError",
    "SourceSpec",
    "Subgraph",
    "UnknownClassError",
    "ValidationReport",
    "build_graph",
    "effectiveness",
    "load_edge_list",
    "neighborhood_first",
    "neighborhood_second",
    "parse_events",
    "random_baseline",
    "recommend",
    "recommend_for_path",
    "replay_evaluate",
    "save_edge_list",
    "score_in_degrees",
]

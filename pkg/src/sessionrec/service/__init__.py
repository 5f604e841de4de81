from .app import create_app, default_build_fn
from .state import BuildOutcome, RebuildScheduler, SnapshotSlot, SnapshotVersion

__all__ = [
    "create_app",
    "default_build_fn",
    "BuildOutcome",
    "RebuildScheduler",
    "SnapshotSlot",
    "SnapshotVersion",
]

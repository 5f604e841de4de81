"""Service and source configuration.

One YAML file declares the event sources (one per kernel class) plus the
service settings.  Relative source paths are resolved against the config
file's directory.

Example:

    sources:
      - class_id: 1
        name: orders
        kind: behavioural
        weight: 5
        path: data/orders.csv
        format: csv
      - class_id: 2
        name: visits
        kind: behavioural
        weight: 1
        path: data/visits.jsonl
        format: jsonl
    rebuild_interval: 3600
    listen_address: 127.0.0.1:8080
    default_limit: 10
    use_weights: true
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError
from .ingest import SourceSpec
from .model import ClassId

DEFAULT_REBUILD_INTERVAL = 3600.0
DEFAULT_LIMIT = 10
DEFAULT_LISTEN = "127.0.0.1:8080"


@dataclass
class ServiceConfig:
    sources: list[SourceSpec] = field(default_factory=list)
    edge_list: Path | None = None
    rebuild_interval: float = DEFAULT_REBUILD_INTERVAL
    listen_address: str = DEFAULT_LISTEN
    default_limit: int = DEFAULT_LIMIT
    use_weights: bool = False

    def __post_init__(self) -> None:
        if self.rebuild_interval < 1:
            raise ConfigError(f"rebuild_interval must be >= 1 second, got {self.rebuild_interval}")
        if self.default_limit < 1:
            raise ConfigError(f"default_limit must be >= 1, got {self.default_limit}")
        if not self.sources and self.edge_list is None:
            raise ConfigError("config must declare sources or an edge_list to serve from")

    @property
    def host(self) -> str:
        return self.listen_address.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        try:
            return int(self.listen_address.rsplit(":", 1)[1])
        except (IndexError, ValueError):
            raise ConfigError(f"listen_address must be host:port, got {self.listen_address!r}") from None


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise ConfigError(f"{context}: missing required key {key!r}")
    return mapping[key]


def parse_source(entry: dict, base_dir: Path, index: int) -> SourceSpec:
    context = f"sources[{index}]"
    if not isinstance(entry, dict):
        raise ConfigError(f"{context}: expected a mapping, got {type(entry).__name__}")
    try:
        class_id = int(_require(entry, "class_id", context))
        weight = int(entry.get("weight", 1))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{context}: {exc}") from None
    path = Path(str(_require(entry, "path", context)))
    if not path.is_absolute():
        path = base_dir / path
    try:
        return SourceSpec(
            class_id=ClassId(class_id),
            class_name=str(_require(entry, "name", context)),
            kind=str(entry.get("kind", "behavioural")),
            weight=weight,
            path=path,
            format=str(_require(entry, "format", context)),
        )
    except ValueError as exc:  # KernelClass field validation
        raise ConfigError(f"{context}: {exc}") from None


def load_config(path: Path) -> ServiceConfig:
    """Parse and validate a YAML config file."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from None
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")

    base_dir = path.parent
    entries = raw.get("sources", [])
    if not isinstance(entries, list):
        raise ConfigError(f"{path}: 'sources' must be a list")
    sources = [parse_source(entry, base_dir, i) for i, entry in enumerate(entries)]

    edge_list = raw.get("edge_list")
    if edge_list is not None:
        edge_list = Path(str(edge_list))
        if not edge_list.is_absolute():
            edge_list = base_dir / edge_list

    try:
        return ServiceConfig(
            sources=sources,
            edge_list=edge_list,
            rebuild_interval=float(raw.get("rebuild_interval", DEFAULT_REBUILD_INTERVAL)),
            listen_address=str(raw.get("listen_address", DEFAULT_LISTEN)),
            default_limit=int(raw.get("default_limit", DEFAULT_LIMIT)),
            use_weights=bool(raw.get("use_weights", False)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from None

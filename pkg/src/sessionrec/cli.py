"""Command-line front door.

Thin wrappers over the core package: `build` runs the ingest pipeline and
persists the edge list with its sidecars, the query commands operate on a
persisted edge list, and `serve` starts the HTTP service with the periodic
rebuild scheduler.

Exit codes: 0 success, 1 domain errors (object not found, invalid data),
2 usage or configuration errors.
"""

from __future__ import annotations

import functools
import json
import logging
import sys
from pathlib import Path

import click

from . import bench as bench_mod
from . import engine
from .config import load_config
from .errors import ConfigError, SessionRecError
from .evaluate import load_interaction_log, replay_evaluate
from .ingest import IdMaps, build_graph, load_edge_list, save_edge_list
from .model import GraphSnapshot, KernelClass, ObjectId

EXIT_DOMAIN_ERROR = 1
EXIT_CONFIG_ERROR = 2


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ConfigError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_CONFIG_ERROR)
        except SessionRecError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_DOMAIN_ERROR)
    return wrapper


def _load_classes(config_path: str | None) -> list[KernelClass] | None:
    if config_path is None:
        return None
    cfg = load_config(Path(config_path))
    return [spec.kernel_class() for spec in cfg.sources]


def _load_snapshot(edges: str, config_path: str | None) -> GraphSnapshot:
    return load_edge_list(Path(edges), classes=_load_classes(config_path))


def _parse_id_list(text: str) -> list[str]:
    return [p for p in (part.strip() for part in text.split(",")) if p]


@click.group()
def main():
    """Session-graph recommendations: build the co-occurrence graph from
    event logs and rank objects by shared-kernel counts."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="YAML config declaring the event sources.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False),
              help="Edge-list file to write (sidecar maps and report go beside it).")
@handle_errors
def build(config_path, out_path):
    """Ingest all sources and write the edge list, id maps and build report."""
    cfg = load_config(Path(config_path))
    if not cfg.sources:
        raise ConfigError("config declares no sources to build from")
    result = build_graph(cfg.sources)
    out = Path(out_path)
    byte_count = save_edge_list(result.snapshot, out)
    result.maps.save(out)
    report_path = out.with_name(out.name + ".report.json")
    report_path.write_text(json.dumps(result.report.as_dict(), sort_keys=True) + "\n", encoding="utf-8")
    s = result.snapshot.stats()
    click.echo(
        f"built {s.arcs} arcs ({s.kernels} kernels, {s.objects} objects, "
        f"{s.classes} classes) in {result.report.elapsed_seconds:.4f}s -> {out} ({byte_count} bytes)"
    )


@main.command()
@click.argument("object_id")
@click.option("--edges", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Edge-list file to query.")
@click.option("--top", type=click.IntRange(min=0), default=None, help="Truncate to the best N.")
@click.option("--weighted", is_flag=True, help="Use class weights (needs --config for the weights).")
@click.option("--path", "path_ids", default=None,
              help="Comma-separated objects viewed before OBJECT_ID; pooled as seeds.")
@click.option("--raw", is_flag=True, help="Translate ids via the sidecar maps (raw keys in and out).")
@click.option("--config", "config_path", default=None, type=click.Path(exists=True, dir_okay=False),
              help="Config supplying the class table (names, weights).")
@handle_errors
def recommend(object_id, edges, top, weighted, path_ids, raw, config_path):
    """Print `object,score` lines for OBJECT_ID, best first."""
    snapshot = _load_snapshot(edges, config_path)
    maps = None
    if raw:
        try:
            maps = IdMaps.load(Path(edges))
        except FileNotFoundError:
            raise ConfigError(f"--raw needs the id map sidecars next to {edges}") from None

    def resolve(key: str) -> ObjectId:
        if maps is not None:
            interned = maps.object_id(key)
            if interned is None:
                raise SessionRecError(f"object {key} not found")
            return interned
        try:
            return ObjectId(int(key))
        except ValueError:
            raise ConfigError(f"object id must be an integer, got {key!r} (use --raw for raw keys)") from None

    seeds = [resolve(object_id)]
    if path_ids:
        seeds.extend(resolve(key) for key in _parse_id_list(path_ids))
    if len(seeds) == 1:
        vector = engine.recommend(snapshot, seeds[0], limit=top, use_weights=weighted)
    else:
        vector = engine.recommend_for_path(snapshot, seeds, limit=top, use_weights=weighted)
    for item in vector:
        shown: int | str = item.object
        if maps is not None:
            raw_key = maps.raw_object(item.object)
            if raw_key is not None:
                shown = raw_key
        click.echo(f"{shown},{item.score}")


@main.command()
@click.option("--edges", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", default=None, type=click.Path(exists=True, dir_okay=False))
@handle_errors
def stats(edges, config_path):
    """Print the graph size counts as one JSON line."""
    snapshot = _load_snapshot(edges, config_path)
    click.echo(json.dumps(snapshot.stats().as_dict(), sort_keys=True))


@main.command()
@click.option("--edges", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", default=None, type=click.Path(exists=True, dir_okay=False))
@handle_errors
def validate(edges, config_path):
    """Check the model constraints; exits 1 when violations are found."""
    snapshot = _load_snapshot(edges, config_path)
    report = snapshot.validate()
    click.echo(json.dumps(report.as_dict(), sort_keys=True))
    if not report.ok:
        sys.exit(EXIT_DOMAIN_ERROR)


@main.command("eval")
@click.option("--log", "log_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Interaction log CSV: visit_key,anchor,followed[,day].")
@click.option("--edges", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--top", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--weighted", is_flag=True)
@click.option("--config", "config_path", default=None, type=click.Path(exists=True, dir_okay=False))
@handle_errors
def eval_cmd(log_path, edges, top, weighted, config_path):
    """Replay an interaction log and report recommendation effectiveness."""
    snapshot = _load_snapshot(edges, config_path)
    try:
        log = load_interaction_log(Path(log_path))
    except ValueError as exc:
        raise ConfigError(f"bad interaction log: {exc}") from None
    report = replay_evaluate(snapshot, log, limit=top, use_weights=weighted)
    click.echo(report.format_text())
    click.echo(report.to_json_line())


@main.command()
@click.option("--steps", required=True, help="Comma-separated target element counts, increasing.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--repetitions", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--query-samples", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False),
              help="Also write the series as a CSV file (with header).")
@handle_errors
def bench(steps, seed, repetitions, query_samples, out_path):
    """Benchmark build time and query latency over synthetic graphs."""
    try:
        step_values = [int(s) for s in _parse_id_list(steps)]
    except ValueError:
        raise ConfigError(f"--steps must be comma-separated integers, got {steps!r}") from None
    series = bench_mod.scaling_bench(
        step_values, generator_seed=seed, repetitions=repetitions, query_samples=query_samples
    )
    click.echo(bench_mod.bench_csv(series, header=False), nl=False)
    if out_path:
        bench_mod.write_bench_csv(series, Path(out_path))


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@handle_errors
def serve(config_path):
    """Run the HTTP service with the periodic rebuild scheduler."""
    import uvicorn

    from .service import create_app

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    cfg = load_config(Path(config_path))
    app = create_app(cfg)
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="info")


if __name__ == "__main__":
    main()

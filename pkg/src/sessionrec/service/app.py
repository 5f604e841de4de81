"""HTTP front end: query the current snapshot, trigger and schedule rebuilds."""

from __future__ import annotations

import logging
from contextlib import asynccontextmanager
from typing import Sequence

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse

from .. import engine
from ..config import ServiceConfig
from ..engine import RecommendationVector
from ..errors import ObjectNotFoundError, RebuildBusyError
from ..ingest import IngestReport, build_graph, load_edge_list, IdMaps
from ..model import ObjectId
from .schemas import (
    HealthResponse,
    PathRecommendResponse,
    RebuildResponse,
    RecommendResponse,
    ScoredItem,
    StatsResponse,
)
from .state import RebuildScheduler, SnapshotSlot, SnapshotVersion

logger = logging.getLogger(__name__)


def default_build_fn(config: ServiceConfig):
    """Wire the slot's build callable from the config: ingest sources or reload an edge list."""
    if config.sources:
        def build_from_sources():
            result = build_graph(config.sources)
            return result.snapshot, result.maps, result.report
        return build_from_sources

    assert config.edge_list is not None
    def build_from_edge_list():
        snapshot = load_edge_list(config.edge_list)
        try:
            maps = IdMaps.load(config.edge_list)
        except FileNotFoundError:
            maps = None
        return snapshot, maps, None
    return build_from_edge_list


def create_app(
    config: ServiceConfig,
    slot: SnapshotSlot | None = None,
    with_scheduler: bool = True,
) -> FastAPI:
    if slot is None:
        slot = SnapshotSlot(default_build_fn(config))
    scheduler = RebuildScheduler(slot, config.rebuild_interval) if with_scheduler else None

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if scheduler is not None:
            scheduler.start()
        yield
        if scheduler is not None:
            scheduler.stop()

    app = FastAPI(title="sessionrec", lifespan=lifespan)
    app.state.slot = slot
    app.state.config = config

    @app.exception_handler(ObjectNotFoundError)
    async def object_not_found(request, exc: ObjectNotFoundError):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    def current_version() -> SnapshotVersion:
        version = slot.current
        if version is None:
            raise HTTPException(status_code=503, detail="snapshot not ready")
        return version

    def resolve_anchor(version: SnapshotVersion, key: str, raw: bool) -> tuple[ObjectId, int | str]:
        """Map a path/query token to an interned object id; echoes the caller's key form."""
        if raw:
            if version.maps is None:
                raise HTTPException(status_code=400, detail="raw key translation unavailable: no id maps")
            interned = version.maps.object_id(key)
            if interned is None:
                raise ObjectNotFoundError(key)
            return interned, key
        try:
            return ObjectId(int(key)), int(key)
        except ValueError:
            raise HTTPException(
                status_code=422,
                detail=f"object id must be an integer (got {key!r}); pass raw=1 for raw keys",
            ) from None

    def render_items(version: SnapshotVersion, vector: RecommendationVector, raw: bool) -> list[ScoredItem]:
        if not raw:
            return [ScoredItem(object=item.object, score=item.score) for item in vector]
        assert version.maps is not None
        out = []
        for item in vector:
            raw_key = version.maps.raw_object(item.object)
            out.append(ScoredItem(object=raw_key if raw_key is not None else item.object, score=item.score))
        return out

    @app.get("/healthz", response_model=HealthResponse)
    def healthz():
        return HealthResponse(status="ok", ready=slot.ready, generation=slot.generation)

    @app.get("/stats", response_model=StatsResponse)
    def stats():
        version = current_version()
        s = version.snapshot.stats()
        return StatsResponse(
            generation=version.generation,
            objects=s.objects,
            kernels=s.kernels,
            nodes=s.nodes,
            arcs=s.arcs,
            classes=s.classes,
            per_class={
                str(cid): {"kernels": cs.kernels, "objects": cs.objects}
                for cid, cs in sorted(s.per_class.items())
            },
        )

    @app.get("/recommend", response_model=PathRecommendResponse)
    def recommend_path(
        path: str = Query(..., description="comma-separated object ids, most recent last"),
        top: int | None = Query(None, ge=0),
        weighted: bool | None = None,
        raw: bool = False,
    ):
        version = current_version()
        keys = [p for p in (part.strip() for part in path.split(",")) if p]
        if not keys:
            raise HTTPException(status_code=422, detail="path must contain at least one object id")
        seeds: list[ObjectId] = []
        echoes: list[int | str] = []
        for key in keys:
            interned, echo = resolve_anchor(version, key, raw)
            seeds.append(interned)
            echoes.append(echo)
        vector = engine.recommend_for_path(
            version.snapshot,
            seeds,
            limit=config.default_limit if top is None else top,
            use_weights=config.use_weights if weighted is None else weighted,
        )
        return PathRecommendResponse(
            path=echoes, generation=version.generation, items=render_items(version, vector, raw)
        )

    @app.get("/recommend/{object_id}", response_model=RecommendResponse)
    def recommend_object(
        object_id: str,
        top: int | None = Query(None, ge=0),
        weighted: bool | None = None,
        raw: bool = False,
    ):
        version = current_version()
        anchor, echo = resolve_anchor(version, object_id, raw)
        vector = engine.recommend(
            version.snapshot,
            anchor,
            limit=config.default_limit if top is None else top,
            use_weights=config.use_weights if weighted is None else weighted,
        )
        return RecommendResponse(
            object=echo, generation=version.generation, items=render_items(version, vector, raw)
        )

    @app.post("/rebuild", response_model=RebuildResponse, responses={409: {}, 500: {}})
    def rebuild():
        try:
            outcome = slot.rebuild_once()
        except RebuildBusyError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None
        if not outcome.ok:
            raise HTTPException(status_code=500, detail=f"rebuild failed: {outcome.error}")
        version = slot.current
        return RebuildResponse(
            status="rebuilt",
            generation=outcome.generation,
            elapsed_seconds=outcome.elapsed_seconds,
            arcs=version.snapshot.count_arcs if version else 0,
        )

    return app

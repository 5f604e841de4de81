"""Request/response bodies for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel


class ScoredItem(BaseModel):
    object: int | str
    score: int


class RecommendResponse(BaseModel):
    object: int | str
    generation: int
    items: list[ScoredItem]


class PathRecommendResponse(BaseModel):
    path: list[int | str]
    generation: int
    items: list[ScoredItem]


class ClassStatsOut(BaseModel):
    kernels: int
    objects: int


class StatsResponse(BaseModel):
    generation: int
    objects: int
    kernels: int
    nodes: int
    arcs: int
    classes: int
    per_class: dict[str, ClassStatsOut]


class HealthResponse(BaseModel):
    status: str
    ready: bool
    generation: int


class RebuildResponse(BaseModel):
    status: str
    generation: int
    elapsed_seconds: float
    arcs: int

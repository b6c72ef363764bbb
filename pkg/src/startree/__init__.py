"""Lazy self-similar tree of maximum degree 3 that survives finite leaf removal."""

from .addr import Base, In, LeafV, RayV, parse_addr, render
from .construction import LevelSpec, ball_at, build_tower, limit_neighbors

__all__ = [
    "Base", "In", "LeafV", "RayV", "parse_addr", "render",
    "LevelSpec", "ball_at", "build_tower", "limit_neighbors",
]

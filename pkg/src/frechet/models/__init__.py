"""Data models and vertex storage."""

from frechet.models.database import VertexStore
from frechet.models.entities import (
    ExtremalCertificate,
    FrechetClass,
    MinCxCase,
    MinCxConstruction,
    Pmf,
    PmfType,
    SearchResult,
    SearchSpec,
    SumExtremal,
    SumPmf,
    SupportPoint,
)
from frechet.models.polynomial import MultilinearPoly, QuadraticPoly

__all__ = [
    "VertexStore",
    "ExtremalCertificate",
    "FrechetClass",
    "MinCxCase",
    "MinCxConstruction",
    "Pmf",
    "PmfType",
    "SearchResult",
    "SearchSpec",
    "SumExtremal",
    "SumPmf",
    "SupportPoint",
    "MultilinearPoly",
    "QuadraticPoly",
]

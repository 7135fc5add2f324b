"""Entrada/salida de datos: registros JSONL, índices persistidos y generador sintético."""

from .generator import GeneratedCollection, GroundTruthRecord, PolygonGenerator, generate_collection
from .loader import DataLoader, IndexFile, dumps, format_number, load_index, save_index
from .validator import DataValidator, MatchRecord, PlantSpec, PolygonRecord, TransformRecord

__all__ = [
    "DataLoader",
    "DataValidator",
    "PolygonGenerator",
    "GeneratedCollection",
    "GroundTruthRecord",
    "IndexFile",
    "MatchRecord",
    "PlantSpec",
    "PolygonRecord",
    "TransformRecord",
    "dumps",
    "format_number",
    "generate_collection",
    "load_index",
    "save_index",
]

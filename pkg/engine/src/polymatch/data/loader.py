"""Lectura y escritura de colecciones JSONL e índices persistidos."""

from __future__ import annotations

import json
import math
import sys
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import Any, TextIO

import numpy as np
from loguru import logger
from pydantic import BaseModel, ValidationError

from ..exceptions import IndexFormatError, IndexIntegrityError
from ..index import FORMAT_VERSION, PolygonIndex
from ..invariants import chordal_distance
from ..models import INFINITY, InvariantValue, Polygon, Signature, SignatureChart, is_infinite
from .validator import DataValidator, PolygonRecord

INTEGRITY_TOL = 1e-12
STDIO = "-"


# Serialización numérica


def format_number(value: float) -> str:
    """Decimal con 17 cifras significativas (ida y vuelta exacta en doble precisión)."""
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    return format(value, ".17g")


def dumps(obj: Any) -> str:
    """JSON compacto con todos los reales a 17 cifras significativas."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_number(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, BaseModel):
        return dumps(obj.model_dump())
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k), ensure_ascii=False)}:{dumps(v)}" for k, v in obj.items())
        return "{" + ",".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, (np.floating, np.integer)):
        return dumps(obj.item())
    raise TypeError(f"Tipo no serializable: {type(obj).__name__}")


def complex_pair(z: complex) -> list[float]:
    """[re, im] de un complejo."""
    return [float(z.real), float(z.imag)]


# Payload del índice


class PlanarPayload(BaseModel):
    """Índice planar: tipo y valores φ del j principal ([re, im] o null)."""

    kind: str
    phi: list[tuple[float, float] | None]


class IndexFile(BaseModel):
    """Contenedor JSON versionado de un :class:`PolygonIndex`."""

    format_version: int
    n: int
    j_set: list[int]
    cell: float
    grid_threshold: int
    polygons: list[PolygonRecord]
    signatures: dict[int, list[tuple[str, float, float]]]
    planar: PlanarPayload


def _encode_phi(value: InvariantValue) -> tuple[float, float] | None:
    if value is None:
        return None
    if is_infinite(value):
        return (math.inf, 0.0)
    return (value.real, value.imag)


def _decode_phi(value: tuple[float, float] | None) -> InvariantValue:
    if value is None:
        return None
    z = complex(*value)
    return INFINITY if is_infinite(z) else z


class DataLoader:
    """Gestor de lectura/escritura de colecciones e índices."""

    def __init__(self, integrity_fraction: float = 0.01, seed: int = 0):
        """Inicializa el DataLoader.

        Args:
            integrity_fraction: Fracción de firmas recomprobadas al cargar un índice
            seed: Semilla para elegir las firmas recomprobadas
        """
        self.integrity_fraction = integrity_fraction
        self.seed = seed
        self.validator = DataValidator()

    # Colecciones JSONL

    @staticmethod
    def _open_read(path: str | Path) -> TextIO:
        if str(path) == STDIO:
            return sys.stdin
        return open(path, encoding="utf-8")

    def iter_polygons(self, path: str | Path) -> Iterator[Polygon]:
        """Recorre los polígonos de un archivo JSONL (``-`` para stdin).

        Raises:
            RecordFormatError: Con el número de línea del primer registro inválido
        """
        stream = self._open_read(path)
        try:
            for number, line in enumerate(stream, start=1):
                if not line.strip():
                    continue
                yield self.validator.parse_record(line, line_number=number)
        finally:
            if stream is not sys.stdin:
                stream.close()

    def read_polygons(self, path: str | Path) -> list[Polygon]:
        """Carga todos los polígonos de un archivo JSONL."""
        polygons = list(self.iter_polygons(path))
        logger.info(f"Polígonos leídos de {path}: {len(polygons)}")
        return polygons

    @staticmethod
    def write_jsonl(records: Iterable[Any], stream: TextIO) -> int:
        """Escribe una línea JSON por registro y devuelve cuántas se escribieron."""
        count = 0
        for record in records:
            stream.write(dumps(record) + "\n")
            count += 1
        return count

    def write_polygons(self, polygons: Iterable[Polygon], path: str | Path) -> int:
        """Guarda polígonos como PolygonRecord JSONL."""
        records = (PolygonRecord.from_polygon(p) for p in polygons)
        if str(path) == STDIO:
            return self.write_jsonl(records, sys.stdout)
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            count = self.write_jsonl(records, f)
        logger.info(f"Polígonos guardados en {path}: {count}")
        return count

    # Índices

    @staticmethod
    def index_payload(index: PolygonIndex) -> IndexFile:
        """Contenedor serializable de un índice."""
        return IndexFile(
            format_version=FORMAT_VERSION,
            n=index.n,
            j_set=index.j_set,
            cell=index.cell,
            grid_threshold=index.grid_threshold,
            polygons=[PolygonRecord.from_polygon(p) for p in index.polygons],
            signatures={
                j: [(s.chart.value, s.coordinate.real, s.coordinate.imag) for s in table.signatures]
                for j, table in index.tables.items()
            },
            planar=PlanarPayload(kind=index.planar.kind, phi=[_encode_phi(v) for v in index.phi]),
        )

    def save_index(self, index: PolygonIndex, path: str | Path) -> Path:
        """Guarda un índice como JSON versionado."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps(self.index_payload(index)) + "\n", encoding="utf-8")
        logger.success(f"Índice guardado en {path}: m={len(index)}, j_set={index.j_set}")
        return path

    def load_index(self, path: str | Path) -> PolygonIndex:
        """Carga un índice, lo reconstruye y recomprueba una muestra de firmas.

        Raises:
            IndexFormatError: Si el archivo no es un índice válido o de otra versión
            IndexIntegrityError: Si las firmas guardadas no coinciden con las recalculadas
        """
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
            payload = IndexFile.model_validate(raw)
        except (json.JSONDecodeError, ValidationError, UnicodeDecodeError) as e:
            raise IndexFormatError(f"Archivo de índice inválido {path}: {e}") from e

        if payload.format_version != FORMAT_VERSION:
            raise IndexFormatError(
                f"Versión de índice {payload.format_version} no soportada "
                f"(esperada {FORMAT_VERSION})"
            )
        m = len(payload.polygons)
        if set(payload.signatures) != set(payload.j_set):
            raise IndexFormatError(
                f"Tablas de firmas {sorted(payload.signatures)} != j_set {payload.j_set}"
            )
        sizes = {len(rows) for rows in payload.signatures.values()} | {len(payload.planar.phi)}
        if sizes != {m}:
            raise IndexFormatError("El número de firmas no coincide con el de polígonos")

        try:
            polygons = [record.to_polygon() for record in payload.polygons]
        except ValueError as e:
            raise IndexFormatError(f"Polígono inválido en el índice: {e}") from e
        index = PolygonIndex(
            polygons, payload.j_set, cell=payload.cell, grid_threshold=payload.grid_threshold
        )
        if index.n != payload.n:
            raise IndexFormatError(f"n={payload.n} declarado, los polígonos tienen n={index.n}")
        self._check_integrity(index, payload)
        logger.info(f"Índice cargado de {path}: m={m}, j_set={payload.j_set}")
        return index

    def _check_integrity(self, index: PolygonIndex, payload: IndexFile) -> None:
        """Recalcula un porcentaje de firmas y valores φ y los compara con los guardados."""
        m = len(index)
        count = min(m, max(1, math.ceil(self.integrity_fraction * m)))
        sample = np.random.default_rng(self.seed).choice(m, size=count, replace=False)

        if payload.planar.kind != index.planar.kind:
            raise IndexIntegrityError(
                f"Índice planar '{payload.planar.kind}' != reconstruido '{index.planar.kind}'"
            )
        for pos in sorted(int(p) for p in sample):
            for j, rows in payload.signatures.items():
                chart, re, im = rows[pos]
                stored = Signature(
                    j=j, n=index.n, chart=SignatureChart(chart), coordinate=complex(re, im)
                )
                fresh = index.tables[j].signatures[pos]
                scale = max(1.0, abs(fresh.coordinate))
                if stored.chart is not fresh.chart or (
                    abs(stored.coordinate - fresh.coordinate) > INTEGRITY_TOL * scale
                ):
                    raise IndexIntegrityError(
                        f"Firma j={j} de '{index.polygons[pos].id}' no coincide con la recalculada"
                    )
            stored_phi = _decode_phi(payload.planar.phi[pos])
            fresh_phi = index.phi[pos]
            if (stored_phi is None) != (fresh_phi is None) or (
                stored_phi is not None and chordal_distance(stored_phi, fresh_phi) > INTEGRITY_TOL
            ):
                raise IndexIntegrityError(
                    f"φ de '{index.polygons[pos].id}' no coincide con el recalculado"
                )
        logger.debug(f"Integridad verificada en {count} de {m} polígonos")


def save_index(index: PolygonIndex, path: str | Path) -> Path:
    """Atajo de :meth:`DataLoader.save_index`."""
    return DataLoader().save_index(index, path)


def load_index(path: str | Path, integrity_fraction: float = 0.01, seed: int = 0) -> PolygonIndex:
    """Atajo de :meth:`DataLoader.load_index`."""
    return DataLoader(integrity_fraction=integrity_fraction, seed=seed).load_index(path)


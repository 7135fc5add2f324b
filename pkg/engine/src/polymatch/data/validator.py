"""Validación de registros de polígonos y especificaciones de entrada."""

from __future__ import annotations

import math
import re
from collections import Counter
from collections.abc import Iterable
from typing import Literal

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..exceptions import MixedSizesError, PlantSpecError, RecordFormatError
from ..invariants import phi_nj
from ..models import Polygon

_PLANT_PATTERN = re.compile(r"^(?P<kind>[a-z-]+)(?::r=(?P<r>[^:]+))?:(?P<count>\d+)$")


class PolygonRecord(BaseModel):
    """Registro JSONL de un polígono: ``{"id": ..., "vertices": [[x, y], ...]}``."""

    model_config = ConfigDict(extra="ignore", frozen=True)

    id: str = Field(min_length=1)
    vertices: list[tuple[float, float]]

    @field_validator("vertices")
    @classmethod
    def _check_vertices(cls, value: list[tuple[float, float]]) -> list[tuple[float, float]]:
        if len(value) < 3:
            raise ValueError(f"se necesitan al menos 3 vértices, recibidos {len(value)}")
        for x, y in value:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValueError(f"coordenada no finita: [{x}, {y}]")
        return value

    def to_polygon(self) -> Polygon:
        """Convierte el registro en :class:`Polygon`."""
        return Polygon(id=self.id, vertices=tuple(complex(x, y) for x, y in self.vertices))

    @classmethod
    def from_polygon(cls, polygon: Polygon) -> PolygonRecord:
        """Registro equivalente a un polígono."""
        return cls(id=polygon.id, vertices=[(z.real, z.imag) for z in polygon.vertices])


class PlantSpec(BaseModel):
    """Copias plantadas del generador: ``kind[:r=R]:count``.

    Ejemplos: ``similarity:3``, ``affine:2``, ``affine-noise:r=0.01:2``.
    """

    kind: Literal["similarity", "affine", "affine-noise"]
    count: int = Field(ge=1)
    r: float | None = Field(default=None, gt=0, lt=math.sqrt(3) / 6)

    @classmethod
    def parse(cls, text: str) -> PlantSpec:
        """Parsea una especificación de plantado.

        Raises:
            PlantSpecError: Si el texto no cumple el formato
        """
        match = _PLANT_PATTERN.match(text.strip())
        if match is None:
            raise PlantSpecError(f"Especificación de plantado inválida: '{text}'")
        try:
            spec = cls(
                kind=match["kind"],
                count=int(match["count"]),
                r=float(match["r"]) if match["r"] is not None else None,
            )
        except (ValidationError, ValueError) as e:
            raise PlantSpecError(f"Especificación de plantado inválida: '{text}': {e}") from e
        if spec.kind == "affine-noise" and spec.r is None:
            raise PlantSpecError(f"'affine-noise' requiere r=...: '{text}'")
        return spec


class TransformRecord(BaseModel):
    """Coeficientes (α, β, γ) como pares [re, im]."""

    alpha: tuple[float, float]
    beta: tuple[float, float]
    gamma: tuple[float, float]


class MatchRecord(BaseModel):
    """Línea de salida de una consulta verificada."""

    query_id: str
    match_id: str | list[str]
    shift: int | list[int]
    transform: TransformRecord
    residual: float


class DataValidator:
    """Valida colecciones de polígonos antes de indexarlas."""

    @staticmethod
    def parse_record(line: str, line_number: int | None = None) -> Polygon:
        """Parsea una línea JSONL.

        Raises:
            RecordFormatError: Si la línea no es un PolygonRecord válido
        """
        try:
            return PolygonRecord.model_validate_json(line).to_polygon()
        except ValidationError as e:
            details = "; ".join(
                f"{'.'.join(str(p) for p in err['loc']) or 'registro'}: {err['msg']}"
                for err in e.errors()
            )
            raise RecordFormatError(details, line=line_number) from e

    @staticmethod
    def validate(polygons: Iterable[Polygon], strict: bool = True) -> tuple[bool, list[str]]:
        """Valida una colección de polígonos.

        Args:
            polygons: Polígonos a validar
            strict: Si es True, lanza excepciones. Si es False, solo retorna warnings

        Returns:
            Tupla (is_valid, warnings)

        Raises:
            MixedSizesError: Con strict, si la colección mezcla distintos n
        """
        polygons = list(polygons)
        warnings: list[str] = []

        # Check 1: colección no vacía
        if not polygons:
            warnings.append("La colección está vacía")
            return False, warnings

        # Check 2: mismo número de vértices
        sizes = Counter(p.n for p in polygons)
        if len(sizes) > 1:
            error = f"La colección mezcla tamaños: {dict(sorted(sizes.items()))}"
            if strict:
                raise MixedSizesError(error)
            warnings.append(error)

        # Check 3: ids únicos
        duplicates = [pid for pid, count in Counter(p.id for p in polygons).items() if count > 1]
        if duplicates:
            error = f"Ids duplicados: {duplicates[:5]}"
            if strict:
                raise RecordFormatError(error)
            warnings.append(error)

        # Check 4: polígonos degenerados
        degenerate = [p.id for p in polygons if p.diameter == 0]
        if degenerate:
            warning = f"{len(degenerate)} polígonos con todos los vértices iguales"
            logger.warning(warning)
            warnings.append(warning)

        # Check 5: polígonos del conjunto nulo (siempre candidatos)
        undefined = [p.id for p in polygons if phi_nj(p, 1) is None]
        if undefined:
            warning = f"{len(undefined)} polígonos con φ indefinido (se verificarán siempre)"
            logger.warning(warning)
            warnings.append(warning)

        is_valid = len(warnings) == 0
        if is_valid:
            logger.success(f"Validación completada: {len(polygons)} polígonos correctos")
        else:
            logger.warning(f"Validación completada con {len(warnings)} warnings")
        return is_valid, warnings

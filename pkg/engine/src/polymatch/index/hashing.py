"""Tabla hash de firmas cuantizadas (una por valor de j)."""

from __future__ import annotations

import math
from collections import defaultdict
from typing import NamedTuple

from ..invariants import signature_distance
from ..models import Signature, SignatureChart

CellKey = tuple[str, int, int]


class ProbeResult(NamedTuple):
    """Resultado de un sondeo de la tabla."""

    positions: list[int]
    probes: int
    extra_probes: int


def cell_key(chart: SignatureChart, coordinate: complex, cell: float) -> CellKey:
    """Celda (carta, ⌊re/ε⌋, ⌊im/ε⌋) de una coordenada."""
    return (chart.value, math.floor(coordinate.real / cell), math.floor(coordinate.imag / cell))


def probe_span(tol: float, cell: float) -> int:
    """Número de anillos de celdas a sondear para cubrir ``tol``."""
    return max(1, math.ceil(tol / cell - 1e-9))


class SignatureHashTable:
    """Tabla hash de firmas para un j fijo.

    Cada polígono ocupa exactamente una celda, o el cubo de indefinidos.
    Las posiciones guardadas son índices en la colección del índice.
    """

    def __init__(self, j: int, cell: float):
        """Inicializa la tabla.

        Args:
            j: Índice del invariante
            cell: Tamaño de celda ε_cell
        """
        self.j = j
        self.cell = cell
        self.buckets: dict[CellKey, list[int]] = defaultdict(list)
        self.undefined: list[int] = []
        self.signatures: list[Signature] = []

    def __len__(self) -> int:
        return len(self.signatures)

    def add(self, signature: Signature) -> int:
        """Añade una firma y devuelve su posición."""
        position = len(self.signatures)
        self.signatures.append(signature)
        if signature.is_undefined:
            self.undefined.append(position)
        else:
            key = cell_key(signature.chart, signature.coordinate, self.cell)
            self.buckets[key].append(position)
        return position

    def _probe_block(
        self, chart: SignatureChart, coordinate: complex, span: int, found: list[int]
    ) -> int:
        """Sondea el bloque (2·span+1)² alrededor de la celda de ``coordinate``.

        Si el bloque tiene más celdas que cubos ocupados hay en la tabla, se
        recorren los cubos ocupados: el coste queda acotado por ambos.
        """
        _, cx, cy = cell_key(chart, coordinate, self.cell)
        if (2 * span + 1) ** 2 > len(self.buckets):
            for (bucket_chart, kx, ky), bucket in self.buckets.items():
                if bucket_chart == chart.value and abs(kx - cx) <= span and abs(ky - cy) <= span:
                    found.extend(bucket)
            return len(self.buckets)

        probes = 0
        for dx in range(-span, span + 1):
            for dy in range(-span, span + 1):
                probes += 1
                bucket = self.buckets.get((chart.value, cx + dx, cy + dy))
                if bucket:
                    found.extend(bucket)
        return probes

    def probe(self, signature: Signature, tol: float) -> ProbeResult:
        """Posiciones cuya firma está a distancia ≤ tol de ``signature``.

        Args:
            signature: Firma de la consulta
            tol: Tolerancia en coordenada de carta

        Returns:
            ProbeResult: posiciones ordenadas, celdas sondeadas en la carta de la
            consulta y sondeos extra (carta espejo y cubo de indefinidos)
        """
        if signature.is_undefined:
            return ProbeResult(list(self.undefined), 0, 1)

        span = probe_span(tol, self.cell)
        raw: list[int] = []
        probes = self._probe_block(signature.chart, signature.coordinate, span, raw)
        extra = 0

        # Cerca del círculo unidad la firma puede estar guardada en la otra carta
        coordinate = signature.coordinate
        if coordinate != 0 and abs(abs(coordinate) - 1.0) <= tol:
            other = (
                SignatureChart.RECIPROCAL
                if signature.chart is SignatureChart.DIRECT
                else SignatureChart.DIRECT
            )
            extra += self._probe_block(other, 1.0 / coordinate, span, raw)

        matches = {
            pos for pos in raw if signature_distance(signature, self.signatures[pos]) <= tol
        }
        if self.undefined:
            matches.update(self.undefined)
            extra += 1
        return ProbeResult(sorted(matches), probes, extra)

    def occupancy(self) -> list[int]:
        """Tamaño de cada celda ocupada (más el cubo de indefinidos)."""
        sizes = [len(bucket) for bucket in self.buckets.values()]
        if self.undefined:
            sizes.append(len(self.undefined))
        return sizes

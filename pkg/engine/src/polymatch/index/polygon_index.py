"""Índice de polígonos: consultas por similitud, afinidad conocida, pares y multi-j."""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterable, Sequence

import numpy as np
import pandas as pd
from loguru import logger

from ..exceptions import (
    AllTriplesCollinearError,
    BadJError,
    EmptyCollectionError,
    MixedSizesError,
    NeedsMultipleJError,
    PolygonIndexError,
    SizeMismatchError,
    UndefinedOperandError,
)
from ..invariants import (
    affine_ratio,
    check_j,
    chordal_distance,
    phi_nj,
    pseudo_hyperbolic_distance,
    rotation_factor,
    signature,
)
from ..matcher import affine_fits, verify_known_affine, verify_similarity
from ..models import (
    INFINITY,
    AffineMap,
    ApollonianQueryCircle,
    CandidateSet,
    InvariantValue,
    MatchResult,
    PairCandidateSet,
    PairMatch,
    Polygon,
    is_infinite,
)
from .hashing import SignatureHashTable
from .kdtree import DiskConstraint, PlanarIndex, build_planar_index

FORMAT_VERSION = 1


def pseudo_hyperbolic_circle(zeta: InvariantValue, k: float) -> ApollonianQueryCircle:
    """Lugar {ξ : |ξ − ζ| = k·|1 − ζ̄ξ|} como circunferencia euclídea.

    Desarrollando |ξ−ζ|² − k²|1−ζ̄ξ|² = A|ξ|² − 2Re(ξ̄B) + C con
    A = 1 − k²|ζ|², B = (1 − k²)ζ, C = |ζ|² − k², el centro es B/A y el
    radio k·|1 − |ζ|²| / |A|. La región d ≤ k es el interior si A > 0.

    Args:
        zeta: Centro pseudo-hiperbólico (finito o INFINITY)
        k: Razón |β/α| buscada

    Returns:
        ApollonianQueryCircle (``is_line`` cuando k²|ζ|² = 1)
    """
    if zeta is None:
        raise UndefinedOperandError("No hay lugar pseudo-hiperbólico para un ζ indefinido")
    if is_infinite(zeta):
        # d(ξ, ∞) = 1/|ξ|: la región d ≤ k es el exterior del círculo de radio 1/k
        radius = math.inf if k == 0 else 1.0 / k
        return ApollonianQueryCircle(center=0j, radius=radius, interior=False)

    modulus2 = abs(zeta) ** 2
    a = 1.0 - k * k * modulus2
    if abs(a) <= 1e-12 * max(1.0, k * k * modulus2):
        return ApollonianQueryCircle(center=zeta, radius=math.inf, interior=True, is_line=True)
    center = (1.0 - k * k) * zeta / a
    radius = k * abs(1.0 - modulus2) / abs(a)
    return ApollonianQueryCircle(center=center, radius=radius, interior=a > 0)


def _band_constraints(zeta: complex, k: float, tol: float) -> list[DiskConstraint]:
    """Restricciones de disco que contienen la banda |d(ζ, ξ) − k| ≤ tol."""
    constraints: list[DiskConstraint] = []
    outer = pseudo_hyperbolic_circle(zeta, k + tol)
    if not outer.is_line:
        constraints.append(DiskConstraint(outer.center, outer.radius, inside=outer.interior))
    if k - tol > 0:
        inner = pseudo_hyperbolic_circle(zeta, k - tol)
        if not inner.is_line and math.isfinite(inner.radius):
            constraints.append(
                DiskConstraint(inner.center, inner.radius, inside=not inner.interior)
            )
    return constraints


def _chordal_ball(target: complex, tol: float) -> list[DiskConstraint]:
    """Restricciones de disco que contienen {ξ finito : d_cordal(ξ, target) ≤ tol}.

    Con T = √(1+|t|²) la bola cordal está dentro del disco euclídeo de radio
    tol·T²/(1 − tol·T) cuando tol·T < 1; si no, no se poda nada.
    """
    if is_infinite(target):
        if tol >= 1:
            return []
        return [DiskConstraint(0j, math.sqrt(1.0 / (tol * tol) - 1.0), inside=False)]
    scale = math.sqrt(1.0 + abs(target) ** 2)
    if tol * scale >= 1:
        return []
    return [DiskConstraint(target, tol * scale * scale / (1.0 - tol * scale), inside=True)]


class PolygonIndex:
    """Índice inmutable sobre una colección de polígonos con el mismo n.

    Guarda una tabla hash de firmas por cada j y un índice planar sobre los
    valores finitos de φ_{n,j0} (j0 = primer j), además de los cubos de
    φ infinito e indefinido.
    """

    def __init__(
        self,
        polygons: Sequence[Polygon],
        j_set: Sequence[int],
        cell: float = 1e-6,
        grid_threshold: int = 64,
    ):
        """Construye el índice (ver :func:`build_index`)."""
        polygons = list(polygons)
        j_set = list(j_set)
        if not polygons:
            raise EmptyCollectionError("No se puede indexar una colección vacía")
        if not j_set:
            raise BadJError("j_set no puede estar vacío")
        if cell <= 0:
            raise PolygonIndexError(f"El tamaño de celda debe ser positivo, recibido {cell}")

        n = polygons[0].n
        sizes = {p.n for p in polygons}
        if len(sizes) > 1:
            raise MixedSizesError(f"La colección mezcla tamaños: {sorted(sizes)}")
        for j in j_set:
            check_j(n, j)
            if 2 * j == n:
                # pesos (−1)^k: φ ≡ 1 para todo polígono no nulo
                raise BadJError(f"j={j} = n/2 no distingue polígonos (φ ≡ 1)")

        self.n = n
        self.j_set = j_set
        self.cell = cell
        self.grid_threshold = grid_threshold
        self.polygons = polygons
        self.positions: dict[str, int] = {}
        for pos, polygon in enumerate(polygons):
            if polygon.id in self.positions:
                raise PolygonIndexError(f"Id de polígono duplicado: '{polygon.id}'")
            self.positions[polygon.id] = pos

        self.tables: dict[int, SignatureHashTable] = {}
        for j in j_set:
            table = SignatureHashTable(j, cell)
            for polygon in polygons:
                table.add(signature(polygon, j))
            self.tables[j] = table

        self.phi: list[InvariantValue] = [phi_nj(p, self.primary_j) for p in polygons]
        finite = [pos for pos, v in enumerate(self.phi) if v is not None and not is_infinite(v)]
        self.infinite = [pos for pos, v in enumerate(self.phi) if v is not None and is_infinite(v)]
        self.undefined = [pos for pos, v in enumerate(self.phi) if v is None]
        points = np.array([self.phi[pos] for pos in finite], dtype=np.complex128)
        self.planar: PlanarIndex = build_planar_index(points, finite, grid_threshold)

        logger.info(
            f"Índice construido: m={len(polygons)}, n={n}, j_set={j_set}, "
            f"planar={self.planar.kind}, infinitos={len(self.infinite)}, "
            f"indefinidos={len(self.undefined)}"
        )

    @property
    def primary_j(self) -> int:
        """j usado por el índice planar y la consulta de similitud."""
        return self.j_set[0]

    def __len__(self) -> int:
        return len(self.polygons)

    def __contains__(self, polygon_id: object) -> bool:
        return polygon_id in self.positions

    def get(self, polygon_id: str) -> Polygon:
        """Polígono almacenado por id."""
        return self.polygons[self.positions[polygon_id]]

    def _check_query(self, query: Polygon) -> None:
        if query.n != self.n:
            raise SizeMismatchError(
                f"Consulta '{query.id}' con n={query.n}, el índice tiene n={self.n}"
            )

    def _ids(self, positions: Iterable[int]) -> list[str]:
        return [self.polygons[pos].id for pos in positions]

    def stats(self) -> pd.DataFrame:
        """Histograma de ocupación de celdas por j."""
        frames = []
        for j, table in self.tables.items():
            counts = pd.Series(table.occupancy(), dtype=int).value_counts().sort_index()
            frames.append(
                pd.DataFrame({"j": j, "bucket_size": counts.index, "buckets": counts.values})
            )
        return pd.concat(frames, ignore_index=True)

    # Consultas

    def query_similarity(self, query: Polygon, tol: float) -> CandidateSet:
        """Candidatos con firma cercana a la de la consulta, verificados por similitud.

        El coste de la parte hash no depende de m: se sondea un bloque fijo
        de celdas alrededor de la firma de la consulta.
        """
        self._check_query(query)
        table = self.tables[self.primary_j]
        positions, probes, extra = table.probe(signature(query, self.primary_j), tol)
        result = CandidateSet(ids=self._ids(positions), probes=probes, extra_probes=extra)
        result.verified = self._verify_similarity(query, positions, tol)
        logger.debug(
            f"query_similarity '{query.id}': {len(positions)} candidatos, "
            f"{len(result.verified)} verificados, {probes}+{extra} sondeos"
        )
        return result

    def _verify_similarity(
        self, query: Polygon, positions: Iterable[int], tol: float
    ) -> list[MatchResult]:
        verified = []
        for pos in positions:
            match = verify_similarity(query, self.polygons[pos], tol)
            if match is not None:
                verified.append(match)
        return sorted(verified, key=lambda m: (m.residual, m.candidate_id))

    def shift_orbit(self, zeta: InvariantValue) -> list[InvariantValue]:
        """Valores distintos λ^{2jℓ}·ζ, ℓ = 0..n−1.

        φ(shift_ℓ(Z)) = λ^{−2jℓ}·φ(Z) y d(λ^c a, λ^c b) = d(a, b), así que
        comparar φ(Z) con cada rotación de ζ cubre todos los desplazamientos.
        """
        if zeta is None or is_infinite(zeta) or zeta == 0:
            return [zeta]
        count = self.n // math.gcd(2 * self.primary_j, self.n)
        return [rotation_factor(self.n, self.primary_j) ** ell * zeta for ell in range(count)]

    def known_affine_candidates(self, zeta: InvariantValue, k: float, tol: float) -> list[int]:
        """Posiciones con |d(φ(Z), λ^{2jℓ}ζ) − k| ≤ tol para algún ℓ, más los indefinidos."""
        if zeta is None:
            return sorted(range(len(self.polygons)))
        matches: set[int] = set()
        for rotated in self.shift_orbit(zeta):
            matches.update(self._band_candidates(rotated, k, tol))
        matches.update(self.undefined)
        return sorted(matches)

    def _band_candidates(self, zeta: complex, k: float, tol: float) -> set[int]:
        """Posiciones con φ definido y |d(φ(Z), ζ) − k| ≤ tol."""
        if is_infinite(zeta):
            low = 1.0 / (k + tol) if k + tol > 0 else math.inf
            high = 1.0 / (k - tol) if k - tol > 0 else math.inf
            constraints = [DiskConstraint(0j, low, inside=False)]
            if math.isfinite(high):
                constraints.append(DiskConstraint(0j, high, inside=True))
        else:
            constraints = _band_constraints(zeta, k, tol)

        pool = list(self.planar.query_region(constraints)) + self.infinite
        return {
            pos
            for pos in pool
            if abs(pseudo_hyperbolic_distance(self.phi[pos], zeta) - k) <= tol
        }

    def reflection_candidates(self, zeta: InvariantValue, tol: float) -> list[int]:
        """Posiciones candidatas para una afinidad con α = 0.

        Con f(z) = βz̄ + γ se cumple φ(f(Z)) = 1/conj(φ(Z)), así que se buscan
        los φ(Z) a distancia cordal ≤ tol de alguna rotación de 1/ζ̄, más los
        indefinidos.
        """
        if zeta is None:
            return sorted(range(len(self.polygons)))
        if is_infinite(zeta):
            target: complex = 0j
        elif zeta == 0:
            target = INFINITY
        else:
            target = 1.0 / zeta.conjugate()

        matches: set[int] = set()
        for rotated in self.shift_orbit(target):
            pool = list(self.planar.query_region(_chordal_ball(rotated, tol))) + self.infinite
            for pos in pool:
                value = self.phi[pos]
                if value is not None and chordal_distance(value, rotated) <= tol:
                    matches.add(pos)
        matches.update(self.undefined)
        return sorted(matches)

    def query_known_affine(self, query: Polygon, f: AffineMap, tol: float) -> CandidateSet:
        """Candidatos Z con query = f(shift_ℓ(Z)) para una afinidad conocida f.

        Con α ≠ 0 se usa la banda |d(φ(Z), ζ) − |β/α|| ≤ tol; con α = 0 (f es
        una reflexión seguida de una similitud) la búsqueda es puntual, ver
        :meth:`reflection_candidates`.
        """
        self._check_query(query)
        zeta = phi_nj(query, self.primary_j)
        if f.alpha == 0:
            k = math.inf
            positions = self.reflection_candidates(zeta, tol)
        else:
            k = affine_ratio(f)
            positions = self.known_affine_candidates(zeta, k, tol)

        verified = []
        for pos in positions:
            match = verify_known_affine(query, self.polygons[pos], f, tol)
            if match is not None:
                verified.append(match)
        verified.sort(key=lambda m: (m.residual, m.candidate_id))
        logger.debug(f"query_known_affine '{query.id}': k={k:.6g}, {len(positions)} candidatos")
        return CandidateSet(ids=self._ids(positions), verified=verified)

    def eta_values(self, zeta: InvariantValue) -> list[tuple[int, float]]:
        """Pares (ℓ, η) con η = d(φ(Z_ℓ), λ^{2js}ζ) para cada rotación s de ζ."""
        if zeta is None:
            raise UndefinedOperandError(
                "La consulta de pares requiere φ definido en ambas consultas"
            )
        orbit = self.shift_orbit(zeta)
        return [
            (pos, pseudo_hyperbolic_distance(value, rotated))
            for pos, value in enumerate(self.phi)
            if value is not None
            for rotated in orbit
        ]

    def pair_candidates(
        self, zeta: InvariantValue, zeta2: InvariantValue, tol: float
    ) -> list[tuple[int, int]]:
        """Pares (ℓ, ℓ′) con |η_ℓ − η′_ℓ′| ≤ tol mediante hash 1-D de η′.

        Cada polígono aporta un η por rotación de ζ, de modo que los pares
        plantados con desplazamientos cíclicos también se proponen. Los
        polígonos con φ indefinido entran siempre, emparejados con todo el
        otro lado. Una consulta con φ indefinido solo puede venir de un
        polígono indefinido (las afinidades conservan el conjunto nulo), así
        que en ese lado solo quedan los indefinidos.
        """
        everything = range(len(self.polygons))
        left = self.undefined if zeta is None else everything
        right = self.undefined if zeta2 is None else everything
        pairs: set[tuple[int, int]] = {(a, b) for a in self.undefined for b in right}
        pairs.update((a, b) for a in left for b in self.undefined)
        if zeta is None or zeta2 is None:
            return sorted(pairs)

        eta = self.eta_values(zeta)
        eta2 = self.eta_values(zeta2)
        width = tol if tol > 0 else self.cell

        buckets: dict[int | None, list[tuple[int, float]]] = defaultdict(list)
        for pos, value in eta2:
            key = math.floor(value / width) if math.isfinite(value) else None
            buckets[key].append((pos, value))

        for pos, value in eta:
            if not math.isfinite(value):
                pairs.update((pos, other) for other, _ in buckets.get(None, []))
                continue
            key = math.floor(value / width)
            for probe in (key - 1, key, key + 1):
                for other, other_value in buckets.get(probe, []):
                    if abs(value - other_value) <= tol:
                        pairs.add((pos, other))
        return sorted(pairs)

    def query_pair(self, query: Polygon, query2: Polygon, tol: float) -> PairCandidateSet:
        """Pares (Z_ℓ, Z_ℓ′) con query = f(shift_s(Z_ℓ)) y query2 = f(shift_t(Z_ℓ′)).

        La misma afinidad f, desconocida, relaciona ambos pares.
        """
        self._check_query(query)
        self._check_query(query2)
        zeta = phi_nj(query, self.primary_j)
        zeta2 = phi_nj(query2, self.primary_j)
        pairs = self.pair_candidates(zeta, zeta2, tol)

        result = PairCandidateSet(
            ids=[(self.polygons[a].id, self.polygons[b].id) for a, b in pairs]
        )
        for a, b in pairs:
            try:
                fits = affine_fits(query, self.polygons[a], tol)
            except AllTriplesCollinearError:
                continue
            for first in fits:
                f = first.as_affine()
                second = verify_known_affine(query2, self.polygons[b], f, tol)
                if second is None:
                    continue
                result.verified.append(
                    PairMatch(
                        candidate_ids=(self.polygons[a].id, self.polygons[b].id),
                        shifts=(first.shift, second.shift),
                        transform=f,
                        residual=max(first.residual, second.residual),
                    )
                )
                break
        result.verified.sort(key=lambda m: (m.residual, m.candidate_ids))
        logger.debug(
            f"query_pair: {len(pairs)} pares candidatos, {len(result.verified)} verificados"
        )
        return result

    def multi_signature_filter(
        self, query: Polygon, tol: float, j_values: Sequence[int] | None = None
    ) -> CandidateSet:
        """Intersección de candidatos de varias firmas, después verificada."""
        self._check_query(query)
        j_values = list(self.j_set if j_values is None else j_values)
        if len(j_values) < 2:
            raise NeedsMultipleJError(
                f"Se necesitan al menos dos valores de j, recibidos {j_values}"
            )
        for j in j_values:
            if j not in self.tables:
                raise BadJError(f"j={j} no está indexado (j_set={self.j_set})")

        surviving: set[int] | None = None
        probes = extra = 0
        for j in j_values:
            positions, used, used_extra = self.tables[j].probe(signature(query, j), tol)
            probes += used
            extra += used_extra
            surviving = set(positions) if surviving is None else surviving & set(positions)
        positions = sorted(surviving or set())
        result = CandidateSet(ids=self._ids(positions), probes=probes, extra_probes=extra)
        result.verified = self._verify_similarity(query, positions, tol)
        return result


def build_index(
    collection: Sequence[Polygon],
    j_set: Sequence[int],
    cell: float = 1e-6,
    grid_threshold: int = 64,
) -> PolygonIndex:
    """Construye un :class:`PolygonIndex`.

    Raises:
        EmptyCollectionError: Si la colección está vacía
        MixedSizesError: Si hay polígonos con distinto n
        BadJError: Si j_set está vacío, fuera de rango o contiene n/2
    """
    return PolygonIndex(collection, j_set, cell=cell, grid_threshold=grid_threshold)


def query_similarity(index: PolygonIndex, query: Polygon, tol: float) -> CandidateSet:
    """Atajo funcional de :meth:`PolygonIndex.query_similarity`."""
    return index.query_similarity(query, tol)


def query_known_affine(
    index: PolygonIndex, query: Polygon, f: AffineMap, tol: float
) -> CandidateSet:
    """Atajo funcional de :meth:`PolygonIndex.query_known_affine`."""
    return index.query_known_affine(query, f, tol)


def query_pair(
    index: PolygonIndex, query: Polygon, query2: Polygon, tol: float
) -> PairCandidateSet:
    """Atajo funcional de :meth:`PolygonIndex.query_pair`."""
    return index.query_pair(query, query2, tol)


def multi_signature_filter(index: PolygonIndex, query: Polygon, tol: float) -> CandidateSet:
    """Atajo funcional de :meth:`PolygonIndex.multi_signature_filter`."""
    return index.multi_signature_filter(query, tol)

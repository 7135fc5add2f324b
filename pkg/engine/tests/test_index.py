"""Tests para el índice de polígonos y sus estructuras auxiliares."""

import cmath
import math

import numpy as np
import pytest
from conftest import random_affine, random_polygon, random_similarity

from polymatch.exceptions import (
    BadJError,
    EmptyCollectionError,
    MixedSizesError,
    NeedsMultipleJError,
    PolygonIndexError,
    SizeMismatchError,
    UndefinedOperandError,
)
from polymatch.geometry import apply_affine_polygon
from polymatch.index import (
    DiskConstraint,
    GridIndex,
    KDTree,
    PolygonIndex,
    SignatureHashTable,
    build_index,
    multi_signature_filter,
    pseudo_hyperbolic_circle,
    query_known_affine,
    query_pair,
    query_similarity,
)
from polymatch.index.hashing import cell_key, probe_span
from polymatch.invariants import (
    affine_ratio,
    chordal_distance,
    phi_nj,
    pseudo_hyperbolic_distance,
    signature,
    signature_distance,
)
from polymatch.models import INFINITY, AffineMap, Polygon, Signature, SignatureChart


def collection(rng: np.random.Generator, m: int, n: int) -> list[Polygon]:
    """m polígonos aleatorios con ids únicos."""
    return [random_polygon(rng, n, f"poly-{i:05d}") for i in range(m)]


def fourier_polygon(polygon_id: str, coefficients: list[complex]) -> Polygon:
    """Polígono con Σ_k λ^{jk} z_k = F_j, de modo que φ_{n,j} = F_j / F_{n−j}."""
    n = len(coefficients)
    lam = cmath.exp(2j * math.pi / n)
    vertices = tuple(
        sum(c * lam ** (-m * k) for m, c in enumerate(coefficients)) / n for k in range(1, n + 1)
    )
    return Polygon(id=polygon_id, vertices=vertices)


def shift_orbit(zeta: complex, n: int, j: int = 1) -> list[complex]:
    """Rotaciones λ_n^{2jℓ}·ζ."""
    return [cmath.exp(2j * math.pi * 2 * j * ell / n) * zeta for ell in range(n)]


class TestHashing:
    """Tests para la tabla hash de firmas."""

    def test_cell_key(self) -> None:
        """Test cuantización por celdas."""
        assert cell_key(SignatureChart.DIRECT, 0.5 + 0.25j, 0.1) == ("direct", 5, 2)
        assert cell_key(SignatureChart.RECIPROCAL, -0.05 + 0j, 0.1) == ("reciprocal", -1, 0)

    def test_probe_span(self) -> None:
        """Test anillos de celdas según tolerancia."""
        assert probe_span(1e-6, 1e-6) == 1
        assert probe_span(1e-7, 1e-6) == 1
        assert probe_span(2.5e-6, 1e-6) == 3

    @staticmethod
    def filled_table(count: int = 30) -> SignatureHashTable:
        """Tabla con ``count`` cubos ocupados lejos del círculo unidad en cada carta."""
        table = SignatureHashTable(j=1, cell=1e-6)
        for i in range(count):
            table.add(Signature(j=1, n=3, chart=SignatureChart.DIRECT, coordinate=0.01 * i + 0j))
            table.add(
                Signature(j=1, n=3, chart=SignatureChart.RECIPROCAL, coordinate=0.01j * i + 0j)
            )
        return table

    def test_default_probe_count(self) -> None:
        """Test que tol = ε_cell sondea un bloque 3×3."""
        table = self.filled_table()
        position = table.add(
            Signature(j=1, n=3, chart=SignatureChart.DIRECT, coordinate=0.3 + 0.1j)
        )
        found, probes, extra = table.probe(
            Signature(j=1, n=3, chart=SignatureChart.DIRECT, coordinate=0.3 + 0.1j + 5e-7), 1e-6
        )
        assert found == [position]
        assert probes == 9
        assert extra == 0

    def test_unit_circle_probes_both_charts(self) -> None:
        """Test que cerca de |σ| = 1 los sondeos de la otra carta se cuentan aparte."""
        table = self.filled_table()
        stored = 1 + 5e-7
        position = table.add(
            Signature(j=1, n=3, chart=SignatureChart.RECIPROCAL, coordinate=1 / stored + 0j)
        )
        query = Signature(j=1, n=3, chart=SignatureChart.DIRECT, coordinate=1 - 2e-7 + 0j)
        found, probes, extra = table.probe(query, 1e-6)
        assert found == [position]
        assert probes == 9
        assert extra == 9

        table.add(Signature(j=1, n=3, chart=SignatureChart.UNDEFINED))
        assert table.probe(query, 1e-6).extra_probes == 10

    def test_wide_tolerance_scans_occupied_buckets(self) -> None:
        """Test que tol ≫ ε_cell no sondea más celdas que cubos ocupados."""
        table = self.filled_table(count=5)
        query = Signature(j=1, n=3, chart=SignatureChart.DIRECT, coordinate=0.02 + 1e-4j)
        result = table.probe(query, 0.015)
        assert result.probes == len(table.buckets) == 10
        expected = [
            pos
            for pos, stored in enumerate(table.signatures)
            if signature_distance(query, stored) <= 0.015
        ]
        assert result.positions == expected == [2, 4, 6]

    def test_undefined_bucket(self) -> None:
        """Test que el cubo de indefinidos siempre se devuelve."""
        table = SignatureHashTable(j=1, cell=1e-6)
        table.add(Signature(j=1, n=3, chart=SignatureChart.UNDEFINED))
        table.add(Signature(j=1, n=3, chart=SignatureChart.DIRECT, coordinate=0.5 + 0j))
        origin = Signature(j=1, n=3, chart=SignatureChart.DIRECT, coordinate=0j)
        found = table.probe(origin, 1e-6).positions
        assert found == [0]
        assert sorted(table.occupancy()) == [1, 1]


class TestPlanarIndexes:
    """Tests para KDTree y GridIndex frente a fuerza bruta."""

    @pytest.fixture
    def points(self, rng) -> np.ndarray:
        return rng.uniform(-1, 1, 500) + 1j * rng.uniform(-1, 1, 500)

    def test_kdtree_ball(self, points) -> None:
        """Test consulta de bola."""
        tree = KDTree(points, list(range(len(points))))
        center, radius = 0.2 - 0.1j, 0.35
        expected = [i for i, p in enumerate(points) if abs(p - center) <= radius]
        assert tree.query_ball(center, radius) == expected

    def test_kdtree_annulus(self, points) -> None:
        """Test consulta de anillo."""
        tree = KDTree(points, list(range(len(points))))
        center = -0.3 + 0.4j
        expected = [i for i, p in enumerate(points) if 0.2 <= abs(p - center) <= 0.5]
        assert tree.query_annulus(center, 0.2, 0.5) == expected

    def test_grid_matches_kdtree(self, points) -> None:
        """Test que la rejilla y el kd-tree responden igual."""
        labels = [10 * i for i in range(len(points))]
        constraints = [
            DiskConstraint(0.1j, 0.6, inside=True),
            DiskConstraint(0.5 + 0j, 0.3, inside=False),
        ]
        grid = GridIndex(points, labels)
        tree = KDTree(points, labels)
        assert grid.query_region(constraints) == tree.query_region(constraints)
        assert len(grid) == len(tree) == len(points)

    def test_empty_indexes(self) -> None:
        """Test índices sin puntos."""
        empty = np.array([], dtype=np.complex128)
        assert KDTree(empty, []).query_ball(0j, 1.0) == []
        assert GridIndex(empty, []).query_region([DiskConstraint(0j, 1.0, inside=True)]) == []


class TestPseudoHyperbolicCircle:
    """Tests para pseudo_hyperbolic_circle."""

    def test_centered_at_origin(self) -> None:
        """Test ζ = 0: círculo |ξ| = k."""
        circle = pseudo_hyperbolic_circle(0j, 0.5)
        assert circle.center == 0
        assert circle.radius == pytest.approx(0.5)
        assert circle.interior

    @pytest.mark.parametrize(
        "zeta,k", [(0.3 + 0.2j, 0.5), (2 + 0j, 0.8), (-0.1 + 1.7j, 0.3), (0.9j, 0.95)]
    )
    def test_points_on_circle_have_distance_k(self, zeta: complex, k: float) -> None:
        """Test que 64 puntos del círculo están a distancia k de ζ."""
        circle = pseudo_hyperbolic_circle(zeta, k)
        assert not circle.is_line
        for theta in np.linspace(0, 2 * np.pi, 64, endpoint=False):
            xi = circle.center + circle.radius * cmath.exp(1j * theta)
            assert pseudo_hyperbolic_distance(zeta, xi) == pytest.approx(k, abs=1e-9)
        center_inside = pseudo_hyperbolic_distance(zeta, circle.center) <= k
        assert center_inside == circle.interior

    def test_infinite_center(self) -> None:
        """Test ζ = ∞: d ≤ k es el exterior de |ξ| = 1/k."""
        circle = pseudo_hyperbolic_circle(INFINITY, 0.5)
        assert circle.radius == pytest.approx(2.0)
        assert not circle.interior

    def test_line_case(self) -> None:
        """Test k|ζ| = 1."""
        assert pseudo_hyperbolic_circle(2 + 0j, 0.5).is_line

    def test_undefined_center(self) -> None:
        """Test ζ indefinido."""
        with pytest.raises(UndefinedOperandError):
            pseudo_hyperbolic_circle(None, 0.5)


class TestBuildIndex:
    """Tests de construcción y errores."""

    def test_errors(self, rng) -> None:
        """Test colecciones y parámetros inválidos."""
        with pytest.raises(EmptyCollectionError):
            build_index([], [1])
        with pytest.raises(MixedSizesError):
            build_index([random_polygon(rng, 4, "a"), random_polygon(rng, 5, "b")], [1])
        with pytest.raises(BadJError):
            build_index([random_polygon(rng, 4)], [4])
        with pytest.raises(BadJError):
            build_index([random_polygon(rng, 4)], [])
        with pytest.raises(PolygonIndexError):
            build_index([random_polygon(rng, 4, "a"), random_polygon(rng, 4, "a")], [1])

    @pytest.mark.parametrize("n", [4, 6, 12])
    def test_half_n_rejected(self, rng, n: int) -> None:
        """Test que j = n/2 se rechaza: los pesos (−1)^k dan φ ≡ 1."""
        polygons = collection(rng, 5, n)
        assert all(phi_nj(p, n // 2) == pytest.approx(1.0) for p in polygons)
        with pytest.raises(BadJError, match="n/2"):
            build_index(polygons, [1, n // 2])
        assert build_index(polygons, [1, n // 2 + 1]).j_set == [1, n // 2 + 1]

    def test_planar_kind_follows_threshold(self, rng) -> None:
        """Test rejilla para colecciones pequeñas y kd-tree para grandes."""
        polygons = collection(rng, 80, 5)
        assert build_index(polygons, [1]).planar.kind == "kdtree"
        assert build_index(polygons, [1], grid_threshold=100).planar.kind == "grid"

    def test_lookup(self, rng) -> None:
        """Test acceso por id."""
        polygons = collection(rng, 10, 4)
        index = build_index(polygons, [1, 3])
        assert len(index) == 10
        assert "poly-00003" in index
        assert index.get("poly-00003") is polygons[3]

    def test_stats(self, rng) -> None:
        """Test columnas del histograma de ocupación."""
        index = build_index(collection(rng, 50, 4), [1, 3])
        stats = index.stats()
        assert list(stats.columns) == ["j", "bucket_size", "buckets"]
        assert set(stats["j"]) == {1, 3}
        for j in (1, 3):
            rows = stats[stats["j"] == j]
            assert int((rows["bucket_size"] * rows["buckets"]).sum()) == 50


class TestQuerySimilarity:
    """Tests para query_similarity."""

    def test_planted_copies_are_found(self, rng) -> None:
        """Test que cada copia semejante desplazada encuentra su fuente."""
        polygons = collection(rng, 300, 6)
        index = build_index(polygons, [1])
        for source in polygons[:20]:
            shift = int(rng.integers(6))
            query = apply_affine_polygon(random_similarity(rng), source.shift(shift), suffix="q")
            result = query_similarity(index, query, tol=1e-6)
            assert source.id in result.verified_ids
            match = result.verified[result.verified_ids.index(source.id)]
            assert match.shift == shift

    def test_candidates_match_brute_force(self, rng) -> None:
        """Test equivalencia con el recorrido lineal de firmas."""
        polygons = collection(rng, 500, 4)
        tol = 0.05
        index = build_index(polygons, [1], cell=tol)
        for query in collection(rng, 30, 4):
            expected = [
                p.id
                for p in polygons
                if signature_distance(signature(query, 1), signature(p, 1)) <= tol
            ]
            assert sorted(index.query_similarity(query, tol).ids) == sorted(expected)

    def test_undefined_polygons_always_candidates(self, rng) -> None:
        """Test que los polígonos del conjunto nulo se devuelven siempre."""
        polygons = collection(rng, 20, 4) + [Polygon(id="dot", vertices=(0.5 + 0.5j,) * 4)]
        index = build_index(polygons, [1])
        result = index.query_similarity(polygons[0], 1e-6)
        assert "dot" in result.ids
        assert "dot" not in result.verified_ids

    def test_size_mismatch(self, rng) -> None:
        """Test consulta con otro n."""
        index = build_index(collection(rng, 5, 4), [1])
        with pytest.raises(SizeMismatchError):
            index.query_similarity(random_polygon(rng, 5), 1e-6)

    @pytest.mark.slow
    @pytest.mark.parametrize("m", [100, 1000, 10_000])
    def test_probe_count_independent_of_m(self, m: int) -> None:
        """Test que la parte hash sondea como mucho 9 celdas para cualquier m.

        Los sondeos de la carta espejo (cerca de |σ| = 1) y del cubo de
        indefinidos se cuentan aparte y tampoco dependen de m.
        """
        rng = np.random.default_rng(m)
        polygons = collection(rng, m, 5)
        index = build_index(polygons, [1])
        queries = collection(rng, 50, 5) + polygons[:: max(1, m // 50)]
        for query in queries:
            result = index.query_similarity(query, 1e-6)
            assert result.probes <= 9
            assert result.extra_probes <= 10

    @pytest.mark.slow
    def test_self_query_recall_large_collection(self) -> None:
        """Test recall completo de autoconsultas con m = 10⁴."""
        rng = np.random.default_rng(7)
        polygons = collection(rng, 10_000, 5)
        index = build_index(polygons, [1])
        for source in polygons[::97]:
            assert source.id in index.query_similarity(source, 1e-6).verified_ids

    @pytest.mark.slow
    def test_planted_similarity_recall_and_precision(self) -> None:
        """Test m = 10⁴, n = 12: 100 copias semejantes plantadas, solo su fuente verifica."""
        rng = np.random.default_rng(12)
        polygons = collection(rng, 10_000, 12)
        index = build_index(polygons, [1])
        for pos in rng.choice(10_000, size=100, replace=False):
            source = polygons[pos]
            shift = int(rng.integers(12))
            f = random_similarity(rng)
            query = apply_affine_polygon(f, source.shift(shift), suffix="q")
            result = index.query_similarity(query, 1e-6)
            assert result.verified_ids == [source.id]
            assert result.verified[0].shift == shift
            assert result.probes <= 9


class TestQueryKnownAffine:
    """Tests para query_known_affine."""

    def test_identity_returns_self(self, rng) -> None:
        """Test f = identidad (k = 0)."""
        polygons = collection(rng, 50, 5)
        index = build_index(polygons, [1])
        result = query_known_affine(index, polygons[7], AffineMap(alpha=1 + 0j), 1e-9)
        assert polygons[7].id in result.verified_ids

    def test_planted_shifted_copy(self, rng) -> None:
        """Test recall de W = f(shift_ℓ(Z)) con β ≠ 0."""
        polygons = collection(rng, 400, 6)
        index = build_index(polygons, [1])
        for source in polygons[:15]:
            f = random_affine(rng, reverse=bool(rng.integers(2)))
            shift = int(rng.integers(6))
            query = apply_affine_polygon(f, source.shift(shift), suffix="q")
            result = index.query_known_affine(query, f, 1e-9)
            assert source.id in result.verified_ids
            assert result.verified[result.verified_ids.index(source.id)].shift == shift

    def test_reflection_query(self, rng) -> None:
        """Test α = 0: f(z) = z̄ + 0.3i lleva φ(Z) a 1/conj(φ(Z))."""
        polygons = collection(rng, 20, 5)
        index = build_index(polygons, [1])
        f = AffineMap(alpha=0j, beta=1 + 0j, gamma=0.3j)
        query = apply_affine_polygon(f, polygons[4].shift(2), suffix="w")
        assert phi_nj(query, 1) == pytest.approx(1 / phi_nj(polygons[4].shift(2), 1).conjugate())

        result = index.query_known_affine(query, f, 1e-6)
        assert polygons[4].id in result.verified_ids
        assert result.verified[result.verified_ids.index(polygons[4].id)].shift == 2

    def test_reflection_candidates_match_linear_scan(self, rng) -> None:
        """Test que la búsqueda con α = 0 equivale al recorrido cordal lineal."""
        polygons = collection(rng, 500, 5)
        index = build_index(polygons, [1])
        phis = [phi_nj(p, 1) for p in polygons]
        tol = 0.02
        for query in collection(rng, 20, 5):
            zeta = phi_nj(query, 1)
            targets = shift_orbit(1 / zeta.conjugate(), 5)
            expected = [
                pos
                for pos, phi in enumerate(phis)
                if any(chordal_distance(phi, target) <= tol for target in targets)
            ]
            assert index.reflection_candidates(zeta, tol) == expected

    def test_reflection_of_zero_and_infinity(self, rng) -> None:
        """Test ζ = 0 busca φ = ∞ y ζ = ∞ busca φ = 0."""
        polygons = collection(rng, 100, 5)
        index = build_index(polygons, [1])
        phis = [phi_nj(p, 1) for p in polygons]
        tol = 0.3
        assert index.reflection_candidates(0j, tol) == [
            pos for pos, phi in enumerate(phis) if chordal_distance(phi, INFINITY) <= tol
        ]
        assert index.reflection_candidates(INFINITY, tol) == [
            pos for pos, phi in enumerate(phis) if chordal_distance(phi, 0j) <= tol
        ]

    @pytest.mark.slow
    def test_candidates_match_linear_scan(self) -> None:
        """Test equivalencia con el recorrido lineal: 100 consultas plantadas, m = 1000."""
        rng = np.random.default_rng(1000)
        polygons = collection(rng, 1000, 5)
        index = build_index(polygons, [1])
        tol = 1e-6
        phis = [phi_nj(p, 1) for p in polygons]
        for pos in rng.choice(1000, size=100, replace=False):
            f = random_affine(rng)
            query = apply_affine_polygon(f, polygons[pos].shift(int(rng.integers(5))), suffix="q")
            zeta = phi_nj(query, 1)
            k = affine_ratio(f)
            expected = [
                other
                for other, phi in enumerate(phis)
                if any(
                    abs(pseudo_hyperbolic_distance(phi, rotated) - k) <= tol
                    for rotated in shift_orbit(zeta, 5)
                )
            ]
            assert pos in expected
            assert index.known_affine_candidates(zeta, k, tol) == expected
            assert polygons[pos].id in index.query_known_affine(query, f, tol).verified_ids

    def test_infinite_query_value(self, rng) -> None:
        """Test ζ = ∞ frente al recorrido lineal."""
        polygons = collection(rng, 200, 5)
        index = build_index(polygons, [1])
        k, tol = 0.6, 0.02
        expected = [
            pos
            for pos, p in enumerate(polygons)
            if abs(pseudo_hyperbolic_distance(phi_nj(p, 1), INFINITY) - k) <= tol
        ]
        assert index.known_affine_candidates(INFINITY, k, tol) == expected

    def test_shift_orbit_size(self, rng) -> None:
        """Test número de rotaciones distintas de ζ."""
        assert len(build_index(collection(rng, 3, 6), [1]).shift_orbit(0.3 + 0j)) == 3
        assert len(build_index(collection(rng, 3, 5), [1]).shift_orbit(0.3 + 0j)) == 5
        assert build_index(collection(rng, 3, 5), [1]).shift_orbit(INFINITY) == [INFINITY]


class TestQueryPair:
    """Tests para query_pair."""

    def test_identity_pair(self, rng) -> None:
        """Test W = Z_a, W′ = Z_b."""
        polygons = collection(rng, 40, 5)
        index = build_index(polygons, [1])
        result = query_pair(index, polygons[3], polygons[11], 1e-9)
        found = {(m.candidate_ids, m.shifts) for m in result.verified}
        assert ((polygons[3].id, polygons[11].id), (0, 0)) in found

    def test_planted_shifted_pair(self, rng) -> None:
        """Test una misma f aplicada a dos polígonos desplazados."""
        polygons = collection(rng, 150, 5)
        index = build_index(polygons, [1])
        f = random_affine(rng, reverse=True)
        w = apply_affine_polygon(f, polygons[20].shift(2), suffix="w")
        w2 = apply_affine_polygon(f, polygons[90].shift(4), suffix="w2")
        result = index.query_pair(w, w2, 1e-9)
        found = {(m.candidate_ids, m.shifts) for m in result.verified}
        assert ((polygons[20].id, polygons[90].id), (2, 4)) in found
        for match in result.verified:
            assert match.residual <= 1e-9

    def test_planted_triangle_pair(self, rng) -> None:
        """Test pares de triángulos, donde cada desplazamiento admite una afinidad exacta."""
        polygons = collection(rng, 30, 3)
        index = build_index(polygons, [1])
        f = random_affine(rng)
        w = apply_affine_polygon(f, polygons[5].shift(1), suffix="w")
        w2 = apply_affine_polygon(f, polygons[17].shift(2), suffix="w2")
        result = index.query_pair(w, w2, 1e-9)
        found = {(m.candidate_ids, m.shifts) for m in result.verified}
        assert ((polygons[5].id, polygons[17].id), (1, 2)) in found

    def test_candidates_match_brute_force(self, rng) -> None:
        """Test equivalencia con el recorrido O(m²) sobre m = 200."""
        polygons = collection(rng, 200, 5)
        index = build_index(polygons, [1])
        w, w2 = random_polygon(rng, 5, "w"), random_polygon(rng, 5, "w2")
        tol = 1e-3
        phis = [phi_nj(p, 1) for p in polygons]
        eta = np.array(
            [[pseudo_hyperbolic_distance(v, z) for z in shift_orbit(phi_nj(w, 1), 5)] for v in phis]
        )
        eta2 = np.array(
            [
                [pseudo_hyperbolic_distance(v, z) for z in shift_orbit(phi_nj(w2, 1), 5)]
                for v in phis
            ]
        )
        close = np.abs(eta[:, None, :, None] - eta2[None, :, None, :]) <= tol
        expected = [tuple(pair) for pair in np.argwhere(close.any(axis=(2, 3))).tolist()]
        assert index.pair_candidates(phi_nj(w, 1), phi_nj(w2, 1), tol) == expected

    def test_undefined_query(self, rng) -> None:
        """Test consulta con φ indefinido: solo los indefinidos pueden ser su origen."""
        index = build_index(collection(rng, 10, 4), [1])
        dot = Polygon(id="dot", vertices=(1j,) * 4)
        result = index.query_pair(dot, random_polygon(rng, 4), 1e-6)
        assert result.ids == []
        assert result.verified == []

    def test_undefined_polygons_are_pair_candidates(self, rng) -> None:
        """Test que un polígono del conjunto nulo entra en los pares y se verifica."""
        null = fourier_polygon("null", [0, 0, 1, 0.5j, 0])
        assert phi_nj(null, 1) is None
        polygons = collection(rng, 30, 5) + [null]
        index = build_index(polygons, [1])
        f = random_affine(rng)
        w = apply_affine_polygon(f, null.shift(1), suffix="w")
        w2 = apply_affine_polygon(f, polygons[7].shift(3), suffix="w2")

        candidates = index.pair_candidates(phi_nj(w, 1), phi_nj(w2, 1), 1e-9)
        assert all(index.polygons[a].id == "null" for a, _ in candidates)
        assert len(candidates) == len(polygons)

        result = index.query_pair(w, w2, 1e-9)
        found = {(m.candidate_ids, m.shifts) for m in result.verified}
        assert found == {(("null", polygons[7].id), (1, 3))}


class TestMultiSignatureFilter:
    """Tests para multi_signature_filter."""

    def test_second_j_removes_collision(self, rng) -> None:
        """Test dos pentágonos con igual σ₁ y distinto σ₂."""
        z1 = fourier_polygon("collide-1", [0, 1, 0.3, 0.2j, 2])
        z2 = fourier_polygon("collide-2", [0, 1, 0.1 + 0.2j, 0.7, 2])
        assert phi_nj(z1, 1) == pytest.approx(0.5)
        assert phi_nj(z2, 1) == pytest.approx(0.5)

        polygons = collection(rng, 50, 5) + [z1, z2]
        single = build_index(polygons, [1])
        assert {"collide-1", "collide-2"} <= set(single.query_similarity(z1, 1e-6).ids)

        double = build_index(polygons, [1, 2])
        result = multi_signature_filter(double, z1, 1e-6)
        assert "collide-1" in result.ids
        assert "collide-2" not in result.ids
        assert result.verified_ids == ["collide-1"]

    def test_intersection_is_monotone(self, rng) -> None:
        """Test que añadir valores de j nunca agranda el conjunto de candidatos."""
        polygons = collection(rng, 300, 7)
        index = build_index(polygons, [1, 2, 3], cell=0.1)
        for query in collection(rng, 10, 7):
            two = set(index.multi_signature_filter(query, 0.1, [1, 2]).ids)
            three = set(index.multi_signature_filter(query, 0.1, [1, 2, 3]).ids)
            assert three <= two

    def test_errors(self, rng) -> None:
        """Test j insuficientes o no indexados."""
        polygons = collection(rng, 10, 5)
        with pytest.raises(NeedsMultipleJError):
            build_index(polygons, [1]).multi_signature_filter(polygons[0], 1e-6)
        with pytest.raises(BadJError):
            build_index(polygons, [1, 2]).multi_signature_filter(polygons[0], 1e-6, [1, 3])


class TestPolygonIndexClass:
    """Tests de la API orientada a objetos."""

    def test_build_index_returns_polygon_index(self, rng) -> None:
        """Test tipo devuelto y j primario."""
        index = build_index(collection(rng, 5, 4), [3, 1])
        assert isinstance(index, PolygonIndex)
        assert index.primary_j == 3

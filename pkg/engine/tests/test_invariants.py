"""Tests para los invariantes φ_{n,j}, las firmas y las distancias."""

import cmath
import math

import numpy as np
import pytest
from conftest import polygon_cases, random_affine, random_polygon, random_similarity
from hypothesis import given, settings
from hypothesis import strategies as st

from polymatch.exceptions import (
    BadJError,
    BadPermutationError,
    UndefinedOperandError,
    ZeroAlphaError,
)
from polymatch.geometry import apply_affine_polygon
from polymatch.invariants import (
    affine_ratio,
    chordal_distance,
    phi_nj,
    phi_perm,
    pseudo_hyperbolic_distance,
    rotation_factor,
    signature,
    signature_distance,
)
from polymatch.models import INFINITY, AffineMap, Polygon, Signature, SignatureChart, is_infinite


def regular_polygon(n: int, reverse: bool = False) -> Polygon:
    """Polígono regular z_k = λ_n^{±k}."""
    sign = -1 if reverse else 1
    return Polygon(
        id=f"regular-{n}",
        vertices=tuple(cmath.exp(sign * 2j * math.pi * k / n) for k in range(1, n + 1)),
    )


def well_conditioned(value) -> bool:
    """φ definido, finito y lejos del círculo unidad."""
    return value is not None and not is_infinite(value) and abs(abs(value) - 1.0) > 1e-3


class TestPhi:
    """Tests para phi_nj."""

    @given(polygon_cases())
    @settings(max_examples=1000, deadline=None)
    def test_similarity_invariance(self, case) -> None:
        """Test φ(s(Z)) = φ(Z) para similitudes directas con |α| ∈ [1e−3, 1e3]."""
        polygon, rng = case
        s = random_similarity(rng, scale_range=(1e-3, 1e3))
        image = apply_affine_polygon(s, polygon)
        for j in range(1, polygon.n):
            original, mapped = phi_nj(polygon, j), phi_nj(image, j)
            if original is None:
                continue
            assert chordal_distance(original, mapped) <= 1e-9

    @given(polygon_cases())
    @settings(max_examples=100, deadline=None)
    def test_cyclic_shift_rotates_phi(self, case) -> None:
        """Test φ(Z) = λ^{2j}·φ(shift₁(Z))."""
        polygon, _ = case
        shifted = polygon.shift(1)
        for j in range(1, polygon.n):
            phi = phi_nj(polygon, j)
            if not well_conditioned(phi):
                continue
            assert rotation_factor(polygon.n, j) * phi_nj(shifted, j) == pytest.approx(
                phi, rel=1e-8, abs=1e-10
            )

    @pytest.mark.parametrize("n", [3, 4, 5, 8])
    def test_regular_polygon_is_zero(self, n: int) -> None:
        """Test que el polígono regular directo tiene φ_{n,1} = 0."""
        assert abs(phi_nj(regular_polygon(n), 1)) <= 1e-12

    @pytest.mark.parametrize("n", [3, 4, 5, 8])
    def test_reversed_regular_polygon_is_infinite(self, n: int) -> None:
        """Test que el polígono regular invertido tiene φ_{n,1} = ∞."""
        assert is_infinite(phi_nj(regular_polygon(n, reverse=True), 1))

    def test_constant_polygon_is_undefined(self) -> None:
        """Test que todos los vértices iguales dan φ indefinido."""
        polygon = Polygon(id="dot", vertices=(1 + 1j,) * 4)
        assert phi_nj(polygon, 1) is None

    def test_bad_j(self, unit_square) -> None:
        """Test j fuera de [1, n−1]."""
        with pytest.raises(BadJError):
            phi_nj(unit_square, 0)
        with pytest.raises(BadJError):
            phi_nj(unit_square, 4)


class TestPhiPerm:
    """Tests para phi_perm."""

    @given(polygon_cases(max_n=10))
    @settings(max_examples=50, deadline=None)
    def test_identity_permutation_matches_phi_1(self, case) -> None:
        """Test φ_p con p = identidad coincide con φ_{n,1}."""
        polygon, _ = case
        expected = phi_nj(polygon, 1)
        value = phi_perm(polygon, range(1, polygon.n + 1))
        if expected is None:
            assert value is None
        else:
            assert chordal_distance(value, expected) <= 1e-12

    def test_translation_invariance(self, rng) -> None:
        """Test que φ_p no cambia al trasladar."""
        polygon = Polygon(id="p", vertices=tuple(complex(*xy) for xy in rng.random((5, 2))))
        moved = apply_affine_polygon(AffineMap(alpha=1 + 0j, gamma=3 - 2j), polygon)
        perm = [3, 1, 5, 2, 4]
        assert chordal_distance(phi_perm(polygon, perm), phi_perm(moved, perm)) <= 1e-9

    @pytest.mark.parametrize("perm", [[1, 1, 2], [0, 1, 2], [1, 2], [1, 2, 3, 4]])
    def test_bad_permutation(self, perm) -> None:
        """Test permutaciones inválidas."""
        triangle = Polygon(id="t", vertices=(0j, 1 + 0j, 1j))
        with pytest.raises(BadPermutationError):
            phi_perm(triangle, perm)


class TestSignature:
    """Tests para signature y signature_distance."""

    @given(polygon_cases())
    @settings(max_examples=100, deadline=None)
    def test_signature_is_shift_invariant(self, case) -> None:
        """Test que (j, φ^n) no depende del vértice inicial."""
        polygon, rng = case
        shifted = polygon.shift(int(rng.integers(1, polygon.n)))
        for j in range(1, polygon.n):
            first, second = signature(polygon, j), signature(shifted, j)
            if first.is_undefined:
                assert second.is_undefined
                continue
            if not well_conditioned(phi_nj(polygon, j)):
                continue
            assert signature_distance(first, second) <= 1e-8

    def test_direct_chart(self) -> None:
        """Test carta directa para |φ| ≤ 1."""
        sig = signature(regular_polygon(5), 1)
        assert sig.chart is SignatureChart.DIRECT
        assert abs(sig.value) <= 1e-12

    def test_infinity_lives_in_reciprocal_chart(self) -> None:
        """Test que φ = ∞ se guarda como coordenada 0 de la carta recíproca."""
        sig = signature(regular_polygon(3, reverse=True), 1)
        assert sig.chart is SignatureChart.RECIPROCAL
        assert sig.coordinate == 0
        assert is_infinite(sig.value)

    def test_undefined_signature(self) -> None:
        """Test firma del conjunto nulo."""
        sig = signature(Polygon(id="dot", vertices=(2j,) * 3), 1)
        assert sig.is_undefined
        assert sig.value is None
        assert signature_distance(sig, sig) == math.inf

    def test_distance_across_charts(self) -> None:
        """Test que el mismo σ en cartas distintas está a distancia 0."""
        direct = Signature(j=1, n=3, chart=SignatureChart.DIRECT, coordinate=0.5 + 0j)
        reciprocal = Signature(j=1, n=3, chart=SignatureChart.RECIPROCAL, coordinate=2 + 0j)
        assert signature_distance(direct, reciprocal) == pytest.approx(0.0)
        assert signature_distance(reciprocal, direct) == pytest.approx(0.0)


class TestAffineIdentity:
    """Tests de la identidad d(φ(Z), φ(f(Z))) = |β|/|α|."""

    @given(polygon_cases(), st.booleans())
    @settings(max_examples=1000, deadline=None)
    def test_distance_equals_affine_ratio(self, case, reverse: bool) -> None:
        """Test la identidad para todo j ≠ n/2, incluidas afinidades que invierten orientación."""
        polygon, rng = case
        f = random_affine(rng, reverse=reverse)
        image = apply_affine_polygon(f, polygon)
        expected = affine_ratio(f)
        for j in range(1, polygon.n):
            phi = phi_nj(polygon, j)
            if 2 * j == polygon.n or not well_conditioned(phi):
                continue
            distance = pseudo_hyperbolic_distance(phi, phi_nj(image, j))
            assert abs(distance - expected) <= 1e-9 * max(1.0, expected)

    def test_distance_independent_of_polygon(self, rng) -> None:
        """Test que para f fija la distancia no depende de Z, n ni j."""
        f = random_affine(rng)
        distances = []
        for _ in range(100):
            n = int(rng.integers(3, 33))
            polygon = random_polygon(rng, n)
            j = int(rng.integers(1, n))
            phi = phi_nj(polygon, j)
            if 2 * j == n or not well_conditioned(phi):
                continue
            image = apply_affine_polygon(f, polygon)
            distances.append(pseudo_hyperbolic_distance(phi, phi_nj(image, j)))
        assert len(distances) >= 50
        expected = affine_ratio(f)
        assert all(abs(d - expected) <= 1e-9 * max(1.0, expected) for d in distances)

    def test_affine_ratio(self) -> None:
        """Test |β|/|α|."""
        assert affine_ratio(AffineMap(alpha=2 + 0j, beta=1j)) == pytest.approx(0.5)
        assert affine_ratio(AffineMap(alpha=1j)) == 0.0

    def test_affine_ratio_needs_alpha(self) -> None:
        """Test α = 0 no tiene cociente."""
        with pytest.raises(ZeroAlphaError):
            affine_ratio(AffineMap(alpha=0j, beta=1 + 0j))


class TestDistances:
    """Tests para las distancias pseudo-hiperbólica y cordal."""

    def test_pseudo_hyperbolic_basics(self) -> None:
        """Test valores elementales."""
        assert pseudo_hyperbolic_distance(0j, 0.5j) == pytest.approx(0.5)
        assert pseudo_hyperbolic_distance(0.3 + 0.1j, 0.3 + 0.1j) == 0.0
        assert pseudo_hyperbolic_distance(INFINITY, INFINITY) == 0.0
        assert pseudo_hyperbolic_distance(INFINITY, 2 + 0j) == pytest.approx(0.5)
        assert pseudo_hyperbolic_distance(0j, INFINITY) == math.inf

    def test_pseudo_hyperbolic_is_moebius_invariant(self, rng) -> None:
        """Test invariancia bajo automorfismos del disco."""
        a, b, c = (complex(*rng.uniform(-0.6, 0.6, 2)) for _ in range(3))

        def automorphism(z: complex) -> complex:
            return cmath.exp(0.7j) * (z - c) / (1 - c.conjugate() * z)

        assert pseudo_hyperbolic_distance(automorphism(a), automorphism(b)) == pytest.approx(
            pseudo_hyperbolic_distance(a, b)
        )

    def test_pseudo_hyperbolic_undefined(self) -> None:
        """Test operandos indefinidos."""
        with pytest.raises(UndefinedOperandError):
            pseudo_hyperbolic_distance(None, 0j)

    def test_chordal(self) -> None:
        """Test métrica cordal en el plano extendido."""
        assert chordal_distance(1 + 0j, -1 + 0j) == pytest.approx(1.0)
        assert chordal_distance(INFINITY, 0j) == pytest.approx(1.0)
        assert chordal_distance(INFINITY, complex(0, math.inf)) == 0.0
        values = np.array([0.2 + 1j, -3 + 0.5j, 10j])
        for a in values:
            for b in values:
                assert chordal_distance(a, b) == pytest.approx(chordal_distance(b, a))
                assert chordal_distance(a, b) <= 1.0

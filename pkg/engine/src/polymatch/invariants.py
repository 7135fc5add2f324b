"""Invariantes de similitud φ_{n,j}, firmas φ^n y distancia pseudo-hiperbólica."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from .exceptions import BadJError, BadPermutationError, UndefinedOperandError, ZeroAlphaError
from .models import (
    INFINITY,
    AffineMap,
    InvariantValue,
    Polygon,
    Signature,
    SignatureChart,
    is_infinite,
)

# Tolerancia relativa para declarar nula una suma ponderada
VANISHING_TOL = 1e-12


def _root_weights(exponents: np.ndarray, n: int) -> np.ndarray:
    """λ_n^e para cada exponente (reducido módulo n)."""
    return np.exp(2j * np.pi * (exponents % n) / n)


def _weighted_ratio(z: np.ndarray, exponents: np.ndarray, n: int) -> InvariantValue:
    """(Σ λ^{e_k} z_k) / (Σ λ^{−e_k} z_k) con la política ∞ / indefinido."""
    numerator = complex(np.sum(_root_weights(exponents, n) * z))
    denominator = complex(np.sum(_root_weights(-exponents, n) * z))
    scale = float(np.sum(np.abs(z)))
    threshold = VANISHING_TOL * scale

    num_zero = abs(numerator) <= threshold
    den_zero = abs(denominator) <= threshold
    if den_zero and num_zero:
        return None
    if den_zero:
        return INFINITY
    return numerator / denominator


def check_j(n: int, j: int) -> None:
    """Valida 1 ≤ j ≤ n−1."""
    if not 1 <= j <= n - 1:
        raise BadJError(f"j={j} fuera del rango [1, {n - 1}]")


def phi_nj(polygon: Polygon, j: int) -> InvariantValue:
    """Invariante de similitud φ_{n,j}.

    Args:
        polygon: Polígono de n vértices
        j: Índice en [1, n−1]

    Returns:
        Valor complejo, INFINITY, o None si el polígono está en el conjunto nulo

    Raises:
        BadJError: Si j está fuera de rango
    """
    n = polygon.n
    check_j(n, j)
    exponents = j * np.arange(1, n + 1)
    return _weighted_ratio(polygon.as_array(), exponents, n)


def phi_perm(polygon: Polygon, permutation: Sequence[int]) -> InvariantValue:
    """Invariante φ_p para una permutación p de {1..n}."""
    n = polygon.n
    perm = list(permutation)
    if sorted(perm) != list(range(1, n + 1)):
        raise BadPermutationError(f"No es una permutación de 1..{n}: {perm}")
    return _weighted_ratio(polygon.as_array(), np.asarray(perm), n)


def rotation_factor(n: int, j: int) -> complex:
    """λ_n^{2j}: φ_{n,j}(Z) = λ_n^{2j}·φ_{n,j}(shift_1(Z))."""
    return complex(_root_weights(np.array([2 * j]), n)[0])


def _power(z: complex, n: int) -> complex:
    """z^n por cuadrados sucesivos."""
    result = 1 + 0j
    base = z
    while n > 0:
        if n & 1:
            result *= base
        base *= base
        n >>= 1
    return result


def signature(polygon: Polygon, j: int) -> Signature:
    """Firma invariante por desplazamiento cíclico: (j, φ_{n,j}(Z)^n)."""
    n = polygon.n
    phi = phi_nj(polygon, j)
    if phi is None:
        return Signature(j=j, n=n, chart=SignatureChart.UNDEFINED)
    if is_infinite(phi):
        return Signature(j=j, n=n, chart=SignatureChart.RECIPROCAL, coordinate=0j)
    if abs(phi) <= 1.0:
        return Signature(j=j, n=n, chart=SignatureChart.DIRECT, coordinate=_power(phi, n))
    return Signature(j=j, n=n, chart=SignatureChart.RECIPROCAL, coordinate=_power(1.0 / phi, n))


def signature_distance(first: Signature, second: Signature) -> float:
    """Distancia entre firmas medida en la coordenada de carta.

    Firmas en cartas distintas se comparan llevando una a la otra carta por
    inversión. Las firmas indefinidas nunca coinciden (distancia infinita).
    """
    if first.is_undefined or second.is_undefined:
        return math.inf
    if first.chart is second.chart:
        return abs(first.coordinate - second.coordinate)

    if first.chart is SignatureChart.DIRECT:
        direct, reciprocal = first, second
    else:
        direct, reciprocal = second, first
    best = math.inf
    if reciprocal.coordinate != 0:
        best = abs(direct.coordinate - 1.0 / reciprocal.coordinate)
    if direct.coordinate != 0:
        best = min(best, abs(1.0 / direct.coordinate - reciprocal.coordinate))
    return best


def chordal_distance(a: complex, b: complex) -> float:
    """Métrica cordal de la esfera de Riemann."""
    a_inf, b_inf = is_infinite(a), is_infinite(b)
    if a_inf and b_inf:
        return 0.0
    if a_inf:
        return 1.0 / math.sqrt(1.0 + abs(b) ** 2)
    if b_inf:
        return 1.0 / math.sqrt(1.0 + abs(a) ** 2)
    return abs(a - b) / math.sqrt((1.0 + abs(a) ** 2) * (1.0 + abs(b) ** 2))


def pseudo_hyperbolic_distance(a: InvariantValue, b: InvariantValue) -> float:
    """|b − a| / |1 − āb| evaluada tal cual, también fuera del disco unidad.

    Raises:
        UndefinedOperandError: Si algún operando es indefinido
    """
    if a is None or b is None:
        raise UndefinedOperandError("Distancia pseudo-hiperbólica con operando indefinido")
    a_inf, b_inf = is_infinite(a), is_infinite(b)
    if a_inf and b_inf:
        return 0.0
    if a_inf or b_inf:
        finite = b if a_inf else a
        return math.inf if finite == 0 else 1.0 / abs(finite)

    numerator = abs(b - a)
    denominator = abs(1 - a.conjugate() * b)
    if denominator == 0.0:
        return 0.0 if numerator == 0.0 else math.inf
    return numerator / denominator


def affine_ratio(f: AffineMap) -> float:
    """|β| / |α|, el valor de la distancia entre φ(Z) y φ(f(Z))."""
    if f.alpha == 0:
        raise ZeroAlphaError("affine_ratio requiere α ≠ 0")
    return abs(f.beta) / abs(f.alpha)

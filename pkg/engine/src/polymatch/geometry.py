"""Primitivas del plano complejo: afinidades, similitudes y predicados."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .exceptions import CoincidentPointsError, CollinearSourceError
from .models import AffineMap, Orientation, Polygon, SimilarityMap

COLLINEAR_TOL = 1e-12

Correspondence = tuple[complex, complex]


def apply_affine(f: AffineMap, z: complex) -> complex:
    """Aplica f(z) = αz + βz̄ + γ."""
    return f.alpha * z + f.beta * z.conjugate() + f.gamma


def apply_affine_array(f: AffineMap, z: np.ndarray) -> np.ndarray:
    """Versión vectorizada de :func:`apply_affine`."""
    return f.alpha * z + f.beta * np.conj(z) + f.gamma


def apply_affine_polygon(f: AffineMap, polygon: Polygon, suffix: str = "f") -> Polygon:
    """Aplica f vértice a vértice; el id resultante lleva el sufijo ``~suffix``."""
    mapped = apply_affine_array(f, polygon.as_array())
    return Polygon(id=f"{polygon.id}~{suffix}", vertices=tuple(complex(w) for w in mapped))


def apply_similarity(s: SimilarityMap, z: complex) -> complex:
    """Aplica s(z) = αz + γ."""
    return s.alpha * z + s.gamma


def invert_affine(f: AffineMap) -> AffineMap:
    """Inversa cerrada de una afinidad."""
    det = f.determinant
    alpha = f.alpha.conjugate() / det
    beta = -f.beta / det
    gamma = -(alpha * f.gamma + beta * f.gamma.conjugate())
    return AffineMap(alpha=alpha, beta=beta, gamma=gamma)


def compose_affine(g: AffineMap, f: AffineMap) -> AffineMap:
    """Composición g∘f."""
    alpha = g.alpha * f.alpha + g.beta * f.beta.conjugate()
    beta = g.alpha * f.beta + g.beta * f.alpha.conjugate()
    gamma = g.alpha * f.gamma + g.beta * f.gamma.conjugate() + g.gamma
    return AffineMap(alpha=alpha, beta=beta, gamma=gamma)


def signed_area2(z1: complex, z2: complex, z3: complex) -> float:
    """Doble del área con signo del triángulo (z1, z2, z3)."""
    return ((z2 - z1).conjugate() * (z3 - z1)).imag


def is_collinear(z1: complex, z2: complex, z3: complex, tol: float = COLLINEAR_TOL) -> bool:
    """Colinealidad invariante por escala: 2|área| ≤ tol·diámetro²."""
    diameter = max(abs(z2 - z1), abs(z3 - z1), abs(z3 - z2))
    if diameter == 0.0:
        return True
    return abs(signed_area2(z1, z2, z3)) <= tol * diameter**2


def orientation(z1: complex, z2: complex, z3: complex, tol: float = COLLINEAR_TOL) -> Orientation:
    """Signo de Im((z3−z1)/(z2−z1)), o DEGENERATE si son colineales."""
    if is_collinear(z1, z2, z3, tol):
        return Orientation.DEGENERATE
    return Orientation.POSITIVE if signed_area2(z1, z2, z3) > 0 else Orientation.NEGATIVE


def solve_similarity(pairs: Sequence[Correspondence]) -> SimilarityMap:
    """Similitud que lleva z1→w1 y z2→w2.

    Args:
        pairs: Dos correspondencias (z_k, w_k)

    Returns:
        SimilarityMap con w_k = αz_k + γ

    Raises:
        CoincidentPointsError: Si z1 = z2
    """
    (z1, w1), (z2, w2) = pairs
    if z1 == z2:
        raise CoincidentPointsError(f"Puntos de anclaje coincidentes: {z1}")
    alpha = (w2 - w1) / (z2 - z1)
    return SimilarityMap(alpha=alpha, gamma=w1 - alpha * z1)


def solve_affine(pairs: Sequence[Correspondence]) -> AffineMap:
    """Afinidad única que lleva tres puntos no colineales a sus imágenes.

    Se resuelven las partes real e imaginaria como dos sistemas reales 3×3
    con la misma matriz (factorización LU con pivoteo parcial).

    Args:
        pairs: Tres correspondencias (z_k, w_k)

    Returns:
        AffineMap con w_k = αz_k + βz̄_k + γ

    Raises:
        CollinearSourceError: Si los z_k son colineales
    """
    (z1, w1), (z2, w2), (z3, w3) = pairs
    if is_collinear(z1, z2, z3):
        raise CollinearSourceError(f"Puntos origen colineales: {z1}, {z2}, {z3}")

    zs = np.array([z1, z2, z3], dtype=np.complex128)
    ws = np.array([w1, w2, w3], dtype=np.complex128)
    # Centrar en z1 mejora el condicionamiento
    origin = zs[0]
    local = zs - origin
    matrix = np.column_stack([local.real, local.imag, np.ones(3)])
    rhs = np.column_stack([ws.real, ws.imag])
    (p, s), (q, t), (g1, g2) = np.linalg.solve(matrix, rhs)

    alpha = complex((p + t) / 2, (s - q) / 2)
    beta = complex((p - t) / 2, (s + q) / 2)
    gamma = complex(g1, g2) - alpha * complex(origin) - beta * complex(origin).conjugate()
    return AffineMap(alpha=alpha, beta=beta, gamma=gamma)

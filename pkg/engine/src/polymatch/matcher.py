"""Verificación exacta de emparejamientos entre un polígono consulta y un candidato."""

from __future__ import annotations

from bisect import bisect_left

import numpy as np
from loguru import logger

from .exceptions import (
    AllTriplesCollinearError,
    CoincidentPointsError,
    InvalidAffineError,
    SizeMismatchError,
    ZeroAlphaError,
)
from .geometry import apply_affine_array, is_collinear, solve_affine, solve_similarity
from .models import AffineMap, MatchResult, Polygon, SimilarityMap

# Área normalizada mínima para usar una terna como anclaje afín
ANCHOR_AREA_TOL = 1e-9


def _check_sizes(query: Polygon, candidate: Polygon) -> int:
    if query.n != candidate.n:
        raise SizeMismatchError(
            f"Tamaños distintos: consulta n={query.n}, candidato '{candidate.id}' n={candidate.n}"
        )
    return query.n


def relative_residual(target: np.ndarray, mapped: np.ndarray, scale: float) -> float:
    """Máxima desviación por vértice relativa al diámetro del objetivo."""
    worst = float(np.max(np.abs(target - mapped)))
    return worst / scale if scale > 0 else worst


def _best_shift(
    target: np.ndarray,
    candidates: list[tuple[int, AffineMap | SimilarityMap, np.ndarray]],
    tol: float,
    scale: float,
) -> tuple[int, AffineMap | SimilarityMap, float] | None:
    """Desplazamiento de residuo mínimo (desempate por índice menor)."""
    best: tuple[int, AffineMap | SimilarityMap, float] | None = None
    for shift, transform, mapped in candidates:
        residual = relative_residual(target, mapped, scale)
        if residual <= tol and (best is None or residual < best[2]):
            best = (shift, transform, residual)
    return best


def verify_similarity(query: Polygon, candidate: Polygon, tol: float) -> MatchResult | None:
    """Busca una similitud s y un desplazamiento ℓ con query_k = s(candidate_{k+ℓ}).

    La similitud se resuelve con los dos vértices que realizan el diámetro
    del candidato.

    Args:
        query: Polígono W
        candidate: Polígono Z
        tol: Tolerancia relativa al diámetro de W

    Returns:
        MatchResult de residuo mínimo, o None
    """
    n = _check_sizes(query, candidate)
    w = query.as_array()
    z = candidate.as_array()
    p, q, _ = candidate.diameter_pair()
    scale = query.diameter

    options: list[tuple[int, AffineMap | SimilarityMap, np.ndarray]] = []
    for shift in range(n):
        try:
            s = solve_similarity(
                [(z[p], w[(p - shift) % n]), (z[q], w[(q - shift) % n])]
            )
        except (CoincidentPointsError, ZeroAlphaError):
            continue
        options.append((shift, s, s.alpha * np.roll(z, -shift) + s.gamma))

    best = _best_shift(w, options, tol, scale)
    if best is None:
        return None
    shift, transform, residual = best
    logger.debug(f"Similitud verificada: '{candidate.id}' shift={shift} residual={residual:.3e}")
    return MatchResult(
        candidate_id=candidate.id, shift=shift, transform=transform, residual=residual
    )


def affine_anchor_starts(candidate: Polygon) -> list[int]:
    """Índices k cuya terna consecutiva (k, k+1, k+2) no es colineal."""
    z = candidate.vertices
    n = candidate.n
    return [
        k
        for k in range(n)
        if not is_collinear(z[k], z[(k + 1) % n], z[(k + 2) % n], ANCHOR_AREA_TOL)
    ]


def _fallback_anchor(candidate: Polygon) -> tuple[int, int, int]:
    """Par diametral más el vértice más alejado de su recta."""
    z = candidate.as_array()
    p, q, _ = candidate.diameter_pair()
    direction = z[q] - z[p]
    heights = np.abs((np.conj(direction) * (z - z[p])).imag)
    r = int(np.argmax(heights))
    if is_collinear(z[p], z[q], z[r], ANCHOR_AREA_TOL):
        raise AllTriplesCollinearError(f"Polígono '{candidate.id}' sin ternas no colineales")
    return p, q, r


def affine_fits(query: Polygon, candidate: Polygon, tol: float) -> list[MatchResult]:
    """Todas las afinidades f, una por desplazamiento ℓ, con residuo ≤ tol.

    Para cada ℓ se usa la primera terna consecutiva no colineal del
    candidato desplazado. Con n = 3 cada ℓ da un ajuste exacto.

    Returns:
        Ajustes ordenados por residuo y después por ℓ

    Raises:
        SizeMismatchError: Si los tamaños difieren
        AllTriplesCollinearError: Si el candidato es degenerado
    """
    n = _check_sizes(query, candidate)
    w = query.as_array()
    z = candidate.as_array()
    scale = query.diameter

    starts = affine_anchor_starts(candidate)
    fallback = None if starts else _fallback_anchor(candidate)

    options: list[tuple[int, AffineMap | SimilarityMap, np.ndarray]] = []
    for shift in range(n):
        if starts:
            start = starts[bisect_left(starts, shift) % len(starts)]
            anchor = (start, (start + 1) % n, (start + 2) % n)
        else:
            anchor = fallback
        try:
            f = solve_affine([(z[i], w[(i - shift) % n]) for i in anchor])
        except InvalidAffineError:
            continue
        options.append((shift, f, apply_affine_array(f, np.roll(z, -shift))))

    fits = []
    for shift, transform, mapped in options:
        residual = relative_residual(w, mapped, scale)
        if residual <= tol:
            fits.append(
                MatchResult(
                    candidate_id=candidate.id, shift=shift, transform=transform, residual=residual
                )
            )
    return sorted(fits, key=lambda m: (m.residual, m.shift))


def verify_affine(query: Polygon, candidate: Polygon, tol: float) -> MatchResult | None:
    """Busca una afinidad f y un desplazamiento ℓ con query_k = f(candidate_{k+ℓ}).

    Devuelve el ajuste de menor residuo de :func:`affine_fits`.
    """
    fits = affine_fits(query, candidate, tol)
    if not fits:
        return None
    best = fits[0]
    logger.debug(
        f"Afinidad verificada: '{candidate.id}' shift={best.shift} residual={best.residual:.3e}"
    )
    return best


def verify_known_affine(
    query: Polygon, candidate: Polygon, f: AffineMap, tol: float
) -> MatchResult | None:
    """Comprueba query = f(shift_ℓ(candidate)) para algún ℓ, sin resolver nada."""
    n = _check_sizes(query, candidate)
    w = query.as_array()
    mapped = apply_affine_array(f, candidate.as_array())
    options: list[tuple[int, AffineMap | SimilarityMap, np.ndarray]] = [
        (shift, f, np.roll(mapped, -shift)) for shift in range(n)
    ]
    best = _best_shift(w, options, tol, query.diameter)
    if best is None:
        return None
    shift, transform, residual = best
    return MatchResult(
        candidate_id=candidate.id, shift=shift, transform=transform, residual=residual
    )

"""Fixtures y estrategias compartidas por los tests de polymatch."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import strategies as st

from polymatch.models import AffineMap, Polygon
from polymatch.settings import reset_settings

LAMBDA = cmath.exp(2j * math.pi / 3)


def random_polygon(rng: np.random.Generator, n: int, polygon_id: str = "Z") -> Polygon:
    """Polígono con vértices uniformes en el cuadrado unidad."""
    coords = rng.random((n, 2))
    return Polygon(id=polygon_id, vertices=tuple(complex(x, y) for x, y in coords))


def random_affine(rng: np.random.Generator, reverse: bool = False) -> AffineMap:
    """Afinidad bien condicionada (|β| ≤ 0.6|α|), opcionalmente invirtiendo orientación."""
    alpha = cmath.rect(rng.uniform(0.5, 2.0), rng.uniform(0, 2 * math.pi))
    beta = cmath.rect(abs(alpha) * rng.uniform(0.0, 0.6), rng.uniform(0, 2 * math.pi))
    if reverse:
        alpha, beta = beta, alpha
    return AffineMap(alpha=alpha, beta=beta, gamma=complex(*rng.uniform(-1, 1, 2)))


def random_similarity(
    rng: np.random.Generator, scale_range: tuple[float, float] = (0.5, 2.0)
) -> AffineMap:
    """Similitud con escala log-uniforme en ``scale_range``."""
    low, high = scale_range
    scale = math.exp(rng.uniform(math.log(low), math.log(high)))
    alpha = cmath.rect(scale, rng.uniform(0, 2 * math.pi))
    return AffineMap(alpha=alpha, gamma=complex(*rng.uniform(-1, 1, 2)))


@st.composite
def polygon_cases(draw, min_n: int = 3, max_n: int = 32):
    """(polígono, generador) a partir de una semilla y un n dibujados."""
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    seed = draw(st.integers(min_value=0, max_value=2**31 - 1))
    rng = np.random.default_rng(seed)
    return random_polygon(rng, n), rng


@pytest.fixture
def rng() -> np.random.Generator:
    """Generador con semilla fija."""
    return np.random.default_rng(12345)


@pytest.fixture
def equilateral() -> tuple[complex, complex, complex]:
    """Triángulo equilátero de referencia (λ, λ², 1)."""
    return (LAMBDA, LAMBDA * LAMBDA, 1 + 0j)


@pytest.fixture
def unit_square() -> Polygon:
    """Cuadrado con coordenadas enteras."""
    return Polygon(id="square", vertices=(0j, 1 + 0j, 1 + 1j, 1j))


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    """Aísla el singleton de configuración del entorno del desarrollador."""
    for name in ("POLYMATCH_TOL", "POLYMATCH_CELL", "POLYMATCH_J_SET", "POLYMATCH_LOG_FILE"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()

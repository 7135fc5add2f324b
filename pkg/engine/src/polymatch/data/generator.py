"""Generador de colecciones sintéticas con copias plantadas y verdad de referencia."""

from __future__ import annotations

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from loguru import logger
from pydantic import BaseModel

from ..geometry import apply_affine_array
from ..models import AffineMap, Polygon
from ..noise import noisy_triangle_sample, sample_disc
from .validator import PlantSpec, TransformRecord


class GroundTruthRecord(BaseModel):
    """Línea del archivo lateral: cómo se obtuvo cada copia plantada."""

    id: str
    source_id: str
    kind: str
    shift: int
    transform: TransformRecord
    r: float | None = None


@dataclass
class GeneratedCollection:
    """Polígonos generados (aleatorios seguidos de plantados) y su verdad de referencia."""

    polygons: list[Polygon] = field(default_factory=list)
    truth: list[GroundTruthRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.polygons)


def transform_record(f: AffineMap) -> TransformRecord:
    """(α, β, γ) como pares [re, im]."""
    return TransformRecord(
        alpha=(f.alpha.real, f.alpha.imag),
        beta=(f.beta.real, f.beta.imag),
        gamma=(f.gamma.real, f.gamma.imag),
    )


class PolygonGenerator:
    """Genera polígonos aleatorios con vértices uniformes en el cuadrado unidad.

    Todo el azar sale de un único ``numpy.random.Generator`` sembrado, así que
    la salida es determinista para (m, n, seed, plantados).
    """

    def __init__(self, n: int, seed: int = 0):
        """Inicializa el generador.

        Args:
            n: Vértices por polígono (≥ 3)
            seed: Semilla del generador aleatorio
        """
        if n < 3:
            raise ValueError(f"n debe ser ≥ 3, recibido {n}")
        self.n = n
        self.seed = seed
        self.rng = np.random.default_rng(seed)

    def random_polygon(self, polygon_id: str) -> Polygon:
        """Polígono con n vértices uniformes en [0, 1]²."""
        coords = self.rng.random((self.n, 2))
        return Polygon(id=polygon_id, vertices=tuple(complex(x, y) for x, y in coords))

    def random_similarity(self) -> AffineMap:
        """Similitud con escala en [0.5, 2], giro uniforme y traslación en [−1, 1]²."""
        scale = self.rng.uniform(0.5, 2.0)
        angle = self.rng.uniform(0.0, 2 * math.pi)
        gamma = complex(*self.rng.uniform(-1.0, 1.0, 2))
        return AffineMap(alpha=cmath.rect(scale, angle), beta=0j, gamma=gamma)

    def random_affine(self) -> AffineMap:
        """Afinidad con |β| ≤ 0.6|α|; la mitad de las veces invierte la orientación."""
        alpha = cmath.rect(self.rng.uniform(0.5, 2.0), self.rng.uniform(0.0, 2 * math.pi))
        beta = cmath.rect(
            abs(alpha) * self.rng.uniform(0.0, 0.6), self.rng.uniform(0.0, 2 * math.pi)
        )
        if self.rng.random() < 0.5:
            alpha, beta = beta, alpha
        gamma = complex(*self.rng.uniform(-1.0, 1.0, 2))
        return AffineMap(alpha=alpha, beta=beta, gamma=gamma)

    def perturb(self, polygon: Polygon, r: float) -> Polygon:
        """Copia ruidosa de un polígono.

        Para triángulos cada vértice se mueve dentro de su elipse de V (imagen
        afín de los discos de radio r del equilátero). Para n > 3 se usa ruido
        uniforme en discos de radio r·diámetro/√3.
        """
        if polygon.n == 3:
            z1, z2, z3 = polygon.vertices
            noisy = noisy_triangle_sample(z1, z2, z3, r, 1, self.rng)[0]
        else:
            radius = r * polygon.diameter / math.sqrt(3)
            noisy = polygon.as_array() + sample_disc(0j, radius, polygon.n, self.rng)
        return Polygon(id=polygon.id, vertices=tuple(complex(z) for z in noisy))

    def plant(
        self, sources: Sequence[Polygon], spec: PlantSpec, start: int = 0
    ) -> GeneratedCollection:
        """Añade ``spec.count`` copias transformadas de fuentes elegidas al azar."""
        planted = GeneratedCollection()
        for k in range(spec.count):
            source = sources[int(self.rng.integers(len(sources)))]
            shift = int(self.rng.integers(self.n))
            f = self.random_similarity() if spec.kind == "similarity" else self.random_affine()

            image = apply_affine_array(f, source.shift(shift).as_array())
            polygon = Polygon(
                id=f"plant-{spec.kind}-{start + k:04d}", vertices=tuple(complex(z) for z in image)
            )
            if spec.kind == "affine-noise":
                assert spec.r is not None
                polygon = self.perturb(polygon, spec.r)

            planted.polygons.append(polygon)
            planted.truth.append(
                GroundTruthRecord(
                    id=polygon.id,
                    source_id=source.id,
                    kind=spec.kind,
                    shift=shift,
                    transform=transform_record(f),
                    r=spec.r,
                )
            )
        return planted

    def generate(self, m: int, plants: Sequence[PlantSpec] = ()) -> GeneratedCollection:
        """Genera m polígonos aleatorios más las copias plantadas.

        Args:
            m: Número de polígonos aleatorios (≥ 1)
            plants: Especificaciones de plantado

        Returns:
            GeneratedCollection con polígonos y verdad de referencia
        """
        if m < 1:
            raise ValueError(f"m debe ser ≥ 1, recibido {m}")
        collection = GeneratedCollection(
            polygons=[self.random_polygon(f"poly-{i:06d}") for i in range(m)]
        )
        sources = list(collection.polygons)
        for spec in plants:
            planted = self.plant(sources, spec, start=len(collection.truth))
            collection.polygons.extend(planted.polygons)
            collection.truth.extend(planted.truth)

        logger.info(
            f"Generados {m} polígonos aleatorios (n={self.n}, seed={self.seed}) "
            f"y {len(collection.truth)} plantados"
        )
        return collection


def generate_collection(
    m: int, n: int, seed: int = 0, plants: Sequence[PlantSpec] = ()
) -> GeneratedCollection:
    """Atajo funcional de :meth:`PolygonGenerator.generate`."""
    return PolygonGenerator(n, seed).generate(m, plants)

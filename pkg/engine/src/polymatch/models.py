"""Modelos de datos para el emparejamiento de polígonos."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .exceptions import InvalidAffineError, ROutOfRangeError, SizeMismatchError, ZeroAlphaError

# Punto del infinito de la esfera de Riemann. Cualquier complejo con una
# componente infinita representa el mismo punto.
INFINITY = complex(math.inf, 0.0)

# Umbral relativo de singularidad para afinidades
AFFINE_DET_TOL = 1e-12

RiemannPoint = complex
InvariantValue = complex | None


def is_infinite(z: complex) -> bool:
    """Verifica si z es el punto del infinito."""
    return cmath.isinf(z)


class Orientation(str, Enum):
    """Orientación de una terna de puntos."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    DEGENERATE = "degenerate"


class SignatureChart(str, Enum):
    """Carta de la esfera en la que se guarda una firma."""

    DIRECT = "direct"
    RECIPROCAL = "reciprocal"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class Polygon:
    """Polígono identificado: lista ordenada (cíclica) de vértices complejos.

    Se permiten autointersecciones; solo se exige n ≥ 3 y coordenadas finitas.
    """

    id: str
    vertices: tuple[complex, ...]

    def __post_init__(self) -> None:
        """Normaliza y valida los vértices."""
        verts = tuple(complex(v) for v in self.vertices)
        if len(verts) < 3:
            raise SizeMismatchError(
                f"Un polígono necesita al menos 3 vértices, recibidos {len(verts)}"
            )
        for v in verts:
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"Vértice no finito en polígono '{self.id}': {v}")
        object.__setattr__(self, "vertices", verts)

    @property
    def n(self) -> int:
        """Número de vértices."""
        return len(self.vertices)

    def as_array(self) -> np.ndarray:
        """Vértices como array complejo de numpy."""
        return np.asarray(self.vertices, dtype=np.complex128)

    def shift(self, ell: int) -> Polygon:
        """Re-enumera el polígono empezando en el vértice ``ell``."""
        ell %= self.n
        if ell == 0:
            return self
        verts = self.vertices[ell:] + self.vertices[:ell]
        return Polygon(id=f"{self.id}@{ell}", vertices=verts)

    def diameter_pair(self) -> tuple[int, int, float]:
        """Par de vértices que realiza el diámetro y su distancia."""
        z = self.as_array()
        dist = np.abs(z[:, None] - z[None, :])
        flat = int(np.argmax(dist))
        i, j = divmod(flat, self.n)
        return i, j, float(dist[i, j])

    @property
    def diameter(self) -> float:
        """Máxima distancia entre dos vértices."""
        return self.diameter_pair()[2]


@dataclass(frozen=True)
class AffineMap:
    """Afinidad real del plano escrita como f(z) = αz + βz̄ + γ."""

    alpha: complex
    beta: complex = 0j
    gamma: complex = 0j

    def __post_init__(self) -> None:
        """Rechaza afinidades (casi) singulares."""
        a2 = abs(self.alpha) ** 2
        b2 = abs(self.beta) ** 2
        if abs(a2 - b2) < AFFINE_DET_TOL * (a2 + b2) or a2 + b2 == 0.0:
            raise InvalidAffineError(
                f"Afinidad singular: |α|²={a2:.3e}, |β|²={b2:.3e}"
            )

    @property
    def determinant(self) -> float:
        """Determinante |α|² − |β|² de la matriz real equivalente."""
        return abs(self.alpha) ** 2 - abs(self.beta) ** 2

    @property
    def preserves_orientation(self) -> bool:
        """True si |α| > |β|."""
        return abs(self.alpha) > abs(self.beta)

    @property
    def is_similarity(self) -> bool:
        """True si β = 0."""
        return self.beta == 0

    def as_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Forma real x ↦ Ax + b."""
        a, b = self.alpha, self.beta
        matrix = np.array(
            [[a.real + b.real, b.imag - a.imag], [a.imag + b.imag, a.real - b.real]]
        )
        return matrix, np.array([self.gamma.real, self.gamma.imag])


@dataclass(frozen=True)
class SimilarityMap:
    """Similitud z ↦ αz + γ con α ≠ 0."""

    alpha: complex
    gamma: complex = 0j

    def __post_init__(self) -> None:
        """Valida α ≠ 0."""
        if self.alpha == 0:
            raise ZeroAlphaError("Una similitud necesita α ≠ 0")

    def to_affine(self) -> AffineMap:
        """Vista como afinidad con β = 0."""
        return AffineMap(alpha=self.alpha, beta=0j, gamma=self.gamma)


@dataclass(frozen=True)
class MatchResult:
    """Resultado verificado de un emparejamiento."""

    candidate_id: str
    shift: int
    transform: AffineMap | SimilarityMap
    residual: float

    def as_affine(self) -> AffineMap:
        """Transformación encontrada en forma afín."""
        if isinstance(self.transform, SimilarityMap):
            return self.transform.to_affine()
        return self.transform


@dataclass(frozen=True)
class PairMatch:
    """Par (ℓ, ℓ′) verificado para una consulta de dos polígonos."""

    candidate_ids: tuple[str, str]
    shifts: tuple[int, int]
    transform: AffineMap
    residual: float


@dataclass(frozen=True)
class Signature:
    """Firma (j, φ_{n,j}(Z)^n) sobre la esfera de Riemann.

    La firma se guarda en una de dos cartas: la directa para |σ| ≤ 1 y la
    recíproca (coordenada 1/σ) para |σ| > 1. El infinito es la coordenada 0
    de la carta recíproca.
    """

    j: int
    n: int
    chart: SignatureChart
    coordinate: complex = 0j

    @property
    def value(self) -> InvariantValue:
        """Valor σ en el plano extendido (None si es indefinido)."""
        if self.chart is SignatureChart.UNDEFINED:
            return None
        if self.chart is SignatureChart.DIRECT:
            return self.coordinate
        if self.coordinate == 0:
            return INFINITY
        return 1.0 / self.coordinate

    @property
    def is_undefined(self) -> bool:
        """True para polígonos del conjunto nulo."""
        return self.chart is SignatureChart.UNDEFINED


@dataclass
class CandidateSet:
    """Candidatos de una consulta y los que superaron la verificación."""

    ids: list[str] = field(default_factory=list)
    verified: list[MatchResult] = field(default_factory=list)
    probes: int = 0
    extra_probes: int = 0

    @property
    def verified_ids(self) -> list[str]:
        """Ids de los emparejamientos verificados."""
        return [m.candidate_id for m in self.verified]


@dataclass
class PairCandidateSet:
    """Candidatos (ℓ, ℓ′) de una consulta de pares."""

    ids: list[tuple[str, str]] = field(default_factory=list)
    verified: list[PairMatch] = field(default_factory=list)


@dataclass(frozen=True)
class ApollonianQueryCircle:
    """Lugar {ξ : d(ζ, ξ) = k} como circunferencia euclídea.

    ``interior`` indica si la región d(ζ, ξ) ≤ k es el interior del círculo
    (si no, es el exterior). ``is_line`` marca el caso k²|ζ|² = 1.
    """

    center: complex
    radius: float
    interior: bool = True
    is_line: bool = False


@dataclass(frozen=True)
class Ellipse:
    """Elipse abierta E_z(ρ1, ρ2, θ) con longitudes de eje completas."""

    center: complex
    major_axis_length: float
    minor_axis_length: float
    angle: float

    @classmethod
    def from_axes(cls, center: complex, axis1: float, axis2: float, angle: float) -> Ellipse:
        """Construye una elipse ordenando ejes y normalizando el ángulo a [0, π)."""
        axis1, axis2 = abs(axis1), abs(axis2)
        if axis2 > axis1:
            axis1, axis2 = axis2, axis1
            angle += math.pi / 2
        angle = math.fmod(angle, math.pi)
        if angle < 0:
            angle += math.pi
        return cls(
            center=complex(center), major_axis_length=axis1, minor_axis_length=axis2, angle=angle
        )

    @property
    def is_segment(self) -> bool:
        """Elipse degenerada (eje menor nulo)."""
        return self.minor_axis_length <= 1e-12 * self.major_axis_length

    def contains(self, point: complex, slack: float = 1e-9) -> bool:
        """Verifica si el punto está dentro (con holgura relativa)."""
        a = self.major_axis_length / 2
        b = max(self.minor_axis_length / 2, 1e-12 * a)
        if a == 0:
            return abs(point - self.center) <= slack
        q = (point - self.center) * cmath.exp(-1j * self.angle)
        return (q.real / a) ** 2 + (q.imag / b) ** 2 <= 1.0 + slack

    def boundary(self, samples: int) -> np.ndarray:
        """Puntos del borde equiespaciados en el parámetro."""
        t = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
        a = self.major_axis_length / 2
        b = self.minor_axis_length / 2
        local = a * np.cos(t) + 1j * b * np.sin(t)
        return self.center + local * np.exp(1j * self.angle)


@dataclass(frozen=True)
class Polydisc:
    """Perturbaciones de radio r del triángulo equilátero (λ, λ², 1)."""

    r: float

    def __post_init__(self) -> None:
        """Valida 0 < r < √3/6."""
        if not 0 < self.r < math.sqrt(3) / 6:
            raise ROutOfRangeError(f"r debe estar en (0, √3/6), recibido {self.r}")

    @property
    def centers(self) -> tuple[complex, complex, complex]:
        """Vértices del equilátero de referencia."""
        lam = cmath.exp(2j * math.pi / 3)
        return (lam, lam * lam, 1 + 0j)


@dataclass(frozen=True)
class NoiseRegion:
    """Región de τ y disco conservador para φ bajo ruido acotado."""

    tau_ellipse: Ellipse
    phi_center: complex
    phi_radius: float

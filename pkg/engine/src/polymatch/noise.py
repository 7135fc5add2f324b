"""Normalización de triángulos y regiones de ruido para φ bajo perturbaciones acotadas.

Un triángulo (z1, z2, z3) es semejante a (0, 1, τ) con τ = (z3−z1)/(z2−z1) y
su invariante es φ = M(τ), con M(τ) = (λ²+τ)/(λ+τ) y λ = e^{2πi/3}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from loguru import logger

from .enclosing import smallest_enclosing_disk
from .exceptions import (
    CoincidentBaseError,
    DegenerateTriangleError,
    NegativeOrientationError,
    PoleInRegionError,
    ROutOfRangeError,
)
from .geometry import orientation
from .invariants import chordal_distance, phi_nj, signature
from .models import (
    INFINITY,
    AffineMap,
    Ellipse,
    NoiseRegion,
    Orientation,
    Polydisc,
    Polygon,
    is_infinite,
)

LAMBDA = cmath.exp(2j * math.pi / 3)
LAMBDA2 = LAMBDA * LAMBDA
SQRT3 = math.sqrt(3.0)
R_MAX = SQRT3 / 6
MIN_SAMPLES = 16


@dataclass(frozen=True)
class ApolloniusCircles:
    """Razones K1 < 1 < K2 y extremos de los diámetros de C_{K1}, C_{K2}."""

    k1: float
    k2: float
    x1: float
    x2: float
    x3: float
    x4: float


@dataclass(frozen=True)
class HexagonCircle:
    """Circunferencia de diámetro [ζ, ξ] que contiene el hexágono de τ."""

    zeta: complex
    xi: complex
    center: complex
    radius: float


@dataclass(frozen=True)
class NoiseCoefficients:
    """Formas polares ae^{iφ1}, be^{iφ2} de la afinidad equilátero → triángulo."""

    a: float
    phi1: float
    b: float
    phi2: float

    @property
    def alpha(self) -> complex:
        return cmath.rect(self.a, self.phi1)

    @property
    def beta(self) -> complex:
        return cmath.rect(self.b, self.phi2)


def _check_r(r: float) -> None:
    if not 0 < r < R_MAX:
        raise ROutOfRangeError(f"r debe estar en (0, √3/6 ≈ {R_MAX:.6f}), recibido {r}")


def _radical(r: float) -> float:
    """√(9 − 20√3r + 12r²)."""
    return math.sqrt(9 - 20 * SQRT3 * r + 12 * r * r)


def _check_positive_triangle(z1: complex, z2: complex, z3: complex) -> None:
    kind = orientation(z1, z2, z3)
    if kind is Orientation.DEGENERATE:
        raise DegenerateTriangleError(f"Triángulo degenerado: {z1}, {z2}, {z3}")
    if kind is Orientation.NEGATIVE:
        raise NegativeOrientationError(f"Triángulo orientado negativamente: {z1}, {z2}, {z3}")


# Transformaciones de Möbius


def tau(z1: complex, z2: complex, z3: complex) -> complex:
    """Parámetro de forma τ = (z3−z1)/(z2−z1)."""
    if z1 == z2:
        raise CoincidentBaseError(f"Base nula: z1 = z2 = {z1}")
    return (z3 - z1) / (z2 - z1)


def moebius_M(t: complex) -> complex:
    """M(τ) = (λ²+τ)/(λ+τ); M(∞) = 1, M(−λ) = ∞."""
    if is_infinite(t):
        return 1 + 0j
    denominator = LAMBDA + t
    if denominator == 0:
        return INFINITY
    return (LAMBDA2 + t) / denominator


def moebius_M_inverse(xi: complex) -> complex:
    """Inversa de M: τ = (λ² − λξ)/(ξ − 1)."""
    if is_infinite(xi):
        return -LAMBDA
    if xi == 1:
        return INFINITY
    return (LAMBDA2 - LAMBDA * xi) / (xi - 1)


def rotation_R(t: complex) -> complex:
    """Rotación de orden 3 R(τ) = 1/(1−τ), punto fijo −λ²."""
    if is_infinite(t):
        return 0j
    if t == 1:
        return INFINITY
    return 1 / (1 - t)


def opposite_shape(t: complex) -> complex:
    """M⁻¹(−M(τ)) = (τ−2)/(2τ−1)."""
    if is_infinite(t):
        return 0.5 + 0j
    if t == 0.5:
        return INFINITY
    return (t - 2) / (2 * t - 1)


def phi_equals_M_of_tau_check(z1: complex, z2: complex, z3: complex, tol: float = 1e-10) -> bool:
    """Comprueba φ(z1, z2, z3) = M(τ(z1, z2, z3)) en métrica cordal."""
    if orientation(z1, z2, z3) is Orientation.DEGENERATE:
        raise DegenerateTriangleError(f"Triángulo degenerado: {z1}, {z2}, {z3}")
    phi = phi_nj(Polygon(id="_triangle", vertices=(z1, z2, z3)), 1)
    if phi is None:
        return False
    return chordal_distance(phi, moebius_M(tau(z1, z2, z3))) <= tol


# Cotas para el triángulo equilátero


def equilateral_bound(r: float) -> float:
    """Máximo de |φ| sobre triángulos con vértices en U_r.

    Se evalúa como 16√3r / (9 − 4√3r + 12r² + (3+2√3r)√(9−20√3r+12r²)),
    algebraicamente igual a la expresión con radicales anidados pero sin
    cancelación para r pequeño.
    """
    _check_r(r)
    a = 9 - 4 * SQRT3 * r + 12 * r * r
    b = 3 + 2 * SQRT3 * r
    return 16 * SQRT3 * r / (a + b * _radical(r))


def taylor_bound(r: float) -> float:
    """Desarrollo de segundo orden (8√3/9)·r + (32/27)·r²."""
    if r < 0:
        raise ROutOfRangeError(f"r debe ser ≥ 0, recibido {r}")
    return 8 * SQRT3 / 9 * r + 32 / 27 * r * r


def apollonius_circles(r: float) -> ApolloniusCircles:
    """Razones de aristas admisibles y diámetros de los círculos de Apolonio."""
    _check_r(r)
    k1 = (SQRT3 - 2 * r) / (SQRT3 + 2 * r)
    return ApolloniusCircles(
        k1=k1,
        k2=1 / k1,
        x1=(2 * r - SQRT3) / (4 * r),
        x2=(SQRT3 - 2 * r) / (2 * SQRT3),
        x3=(SQRT3 + 2 * r) / (2 * SQRT3),
        x4=(SQRT3 + 2 * r) / (4 * r),
    )


def hexagon_circle(r: float) -> HexagonCircle:
    """Circunferencia por los vértices inferior ζ y superior ξ del hexágono de τ."""
    _check_r(r)
    s = _radical(r)
    base = SQRT3 + 2 * r
    zeta = complex(0.5, s / (2 * base))
    xi = complex(0.5, 3 * base / (2 * s))
    rho = 8 * SQRT3 * r / (base * s)
    return HexagonCircle(zeta=zeta, xi=xi, center=(zeta + xi) / 2, radius=rho)


# Triángulos generales


def affine_from_equilateral(z1: complex, z2: complex, z3: complex) -> AffineMap:
    """Afinidad que lleva (λ, λ², 1) a (z1, z2, z3)."""
    return AffineMap(
        alpha=(LAMBDA2 * z1 + LAMBDA * z2 + z3) / 3,
        beta=(LAMBDA * z1 + LAMBDA2 * z2 + z3) / 3,
        gamma=(z1 + z2 + z3) / 3,
    )


def triangle_noise_coefficients(z1: complex, z2: complex, z3: complex) -> NoiseCoefficients:
    """Coeficientes (a, φ1, b, φ2) de un triángulo positivamente orientado."""
    _check_positive_triangle(z1, z2, z3)
    f = affine_from_equilateral(z1, z2, z3)
    a, phi1 = cmath.polar(f.alpha)
    b, phi2 = cmath.polar(f.beta)
    if b <= 1e-12 * a:
        phi2 = 0.0
    return NoiseCoefficients(a=a, phi1=phi1, b=b, phi2=phi2)


def vertex_ellipses(
    z1: complex, z2: complex, z3: complex, r: float
) -> tuple[Ellipse, Ellipse, Ellipse]:
    """Elipses E_{z_j}(2r(a+b), 2r|a−b|, (φ1+φ2)/2), imagen de U_r."""
    _check_r(r)
    c = triangle_noise_coefficients(z1, z2, z3)
    theta = (c.phi1 + c.phi2) / 2
    major = 2 * r * (c.a + c.b)
    minor = 2 * r * abs(c.a - c.b)
    first, second, third = (Ellipse.from_axes(z, major, minor, theta) for z in (z1, z2, z3))
    return first, second, third


def h_reduction(f: AffineMap) -> tuple[complex, complex]:
    """Acción de f sobre el vértice libre de (0, 1, τ).

    (f(0), f(1), f(τ)) es semejante a (0, 1, h(τ)) con
    h(τ) = (ατ + βτ̄)/(α+β). Devuelve (c1, c2) con h(τ) = c1·τ + c2·τ̄.
    """
    denominator = f.alpha + f.beta
    if denominator == 0:
        raise DegenerateTriangleError("f(0) = f(1): la reducción no está definida")
    return f.alpha / denominator, f.beta / denominator


def tau_ellipse_closed_form(z1: complex, z2: complex, z3: complex, r: float) -> Ellipse:
    """Elipse cerrada para τ de triángulos con vértices en V.

    Es la imagen de la circunferencia del hexágono por la afinidad que el
    mapa equilátero → (z1, z2, z3) induce sobre τ con la base fija.
    """
    _check_r(r)
    c = triangle_noise_coefficients(z1, z2, z3)
    rho = hexagon_circle(r).radius
    s = _radical(r)
    base = z2 - z1
    w = 0.5 - SQRT3 * (z1 + z2 - 2 * z3) * (9 + 12 * r * r - 4 * SQRT3 * r) / (
        6 * base * (SQRT3 + 2 * r) * s
    )
    scale = 2 * SQRT3 * rho / abs(base)
    return Ellipse.from_axes(
        w,
        scale * (c.a + c.b),
        scale * abs(c.a - c.b),
        (c.phi1 + c.phi2) / 2 - cmath.phase(base),
    )


def base_rotation_bound(z1: complex, z2: complex, z3: complex, r: float) -> float:
    """Cota del desplazamiento de τ debido al giro de la base perturbada.

    La base (u2 − u1) del equilátero perturbado gira a lo sumo
    arcsin(2r/√3), lo que desplaza τ como mucho 8·r·a·b·Im(ξ)/((a−b)|z2−z1|).
    """
    c = triangle_noise_coefficients(z1, z2, z3)
    if c.b <= 1e-12 * c.a:
        return 0.0
    top = hexagon_circle(r).xi.imag
    return 8 * r * c.a * c.b * top / ((c.a - c.b) * abs(z2 - z1))


def tau_region(z1: complex, z2: complex, z3: complex, r: float) -> Ellipse:
    """Elipse que contiene τ de todo triángulo con vértices en V.

    Parte de :func:`tau_ellipse_closed_form` y agranda ambos semiejes en
    √(e² + 2eA), con A el semieje mayor y e = :func:`base_rotation_bound`,
    lo que cubre la suma de Minkowski con el disco de radio e.

    Raises:
        DegenerateTriangleError: Triángulo degenerado
        NegativeOrientationError: Triángulo orientado negativamente
        ROutOfRangeError: r fuera de (0, √3/6)
    """
    closed = tau_ellipse_closed_form(z1, z2, z3, r)
    e = base_rotation_bound(z1, z2, z3, r)
    if e == 0.0:
        return closed
    semi_major = closed.major_axis_length / 2
    grow = math.sqrt(e * e + 2 * e * semi_major)
    return Ellipse.from_axes(
        closed.center,
        closed.major_axis_length + 2 * grow,
        closed.minor_axis_length + 2 * grow,
        closed.angle,
    )


def phi_noise_disk(
    z1: complex, z2: complex, z3: complex, r: float, samples: int = 1024
) -> NoiseRegion:
    """Disco conservador que contiene φ de todo triángulo con vértices en V.

    Se muestrea el borde de :func:`tau_region`, se aplica M y se toma el
    disco mínimo de las imágenes, inflado por el mayor hueco entre muestras
    consecutivas.

    Raises:
        PoleInRegionError: Si la elipse contiene el polo −λ de M
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"Se necesitan al menos {MIN_SAMPLES} muestras, recibidas {samples}")
    ellipse = tau_region(z1, z2, z3, r)
    if ellipse.contains(-LAMBDA, slack=0.0):
        raise PoleInRegionError("La región de τ contiene el polo de M: ruido demasiado grande")

    boundary = ellipse.boundary(samples)
    images = (LAMBDA2 + boundary) / (LAMBDA + boundary)
    disk = smallest_enclosing_disk(images)
    gap = float(np.max(np.abs(np.roll(images, -1) - images)))
    logger.debug(f"phi_noise_disk: radio={disk.radius:.6g}, hueco={gap:.3g}, muestras={samples}")
    return NoiseRegion(tau_ellipse=ellipse, phi_center=disk.center, phi_radius=disk.radius + gap)


# Muestreo Monte-Carlo


def sample_disc(center: complex, r: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Muestras uniformes en un disco por rechazo desde el cuadrado envolvente."""
    out = np.empty(0, dtype=np.complex128)
    while len(out) < count:
        need = 2 * (count - len(out)) + 8
        candidates = rng.uniform(-1.0, 1.0, need) + 1j * rng.uniform(-1.0, 1.0, need)
        out = np.concatenate([out, candidates[np.abs(candidates) <= 1.0]])
    return center + r * out[:count]


def equilateral_polydisc_sample(r: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Triángulos (count, 3) con cada vértice uniforme en su disco de U_r."""
    centers = Polydisc(r).centers
    return np.column_stack([sample_disc(c, r, count, rng) for c in centers])


def noisy_triangle_sample(
    z1: complex, z2: complex, z3: complex, r: float, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Triángulos (count, 3) con vértices en V (imagen afín de U_r)."""
    f = affine_from_equilateral(z1, z2, z3)
    u = equilateral_polydisc_sample(r, count, rng)
    return f.alpha * u + f.beta * np.conj(u) + f.gamma


def triangle_phi(triangles: np.ndarray) -> np.ndarray:
    """φ vectorizado para un array (count, 3) de triángulos."""
    z1, z2, z3 = triangles[:, 0], triangles[:, 1], triangles[:, 2]
    return (LAMBDA * z1 + LAMBDA2 * z2 + z3) / (LAMBDA2 * z1 + LAMBDA * z2 + z3)


def triangle_tau(triangles: np.ndarray) -> np.ndarray:
    """τ vectorizado para un array (count, 3) de triángulos."""
    return (triangles[:, 2] - triangles[:, 0]) / (triangles[:, 1] - triangles[:, 0])


def estimate_signature_tolerance(
    polygon: Polygon, j: int, noise: float, samples: int = 1000, seed: int = 0
) -> float:
    """Dispersión cordal empírica de la firma bajo ruido uniforme en los vértices.

    Estimación no rigurosa para n > 3: devuelve el máximo observado de la
    distancia cordal entre σ(Z) y σ(Z + ruido), con ruido uniforme en discos
    de radio ``noise``.
    """
    rng = np.random.default_rng(seed)
    reference = signature(polygon, j).value
    if reference is None:
        return math.inf
    vertices = polygon.as_array()
    worst = 0.0
    for _ in range(samples):
        offsets = np.array([complex(v) for v in sample_disc(0j, noise, polygon.n, rng)])
        noisy = Polygon(id=polygon.id, vertices=tuple(vertices + offsets))
        value = signature(noisy, j).value
        if value is None:
            return math.inf
        worst = max(worst, chordal_distance(reference, value))
    logger.info(f"Tolerancia empírica de firma para '{polygon.id}' (j={j}): {worst:.3e}")
    return worst

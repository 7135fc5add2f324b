"""Disco mínimo que encierra un conjunto de puntos (Welzl incremental)."""

from __future__ import annotations

from collections.abc import Sequence
from typing import NamedTuple

import numpy as np

_CONTAIN_TOL = 1e-12


class Disk(NamedTuple):
    """Disco cerrado del plano complejo."""

    center: complex
    radius: float

    def contains(self, point: complex, slack: float = _CONTAIN_TOL) -> bool:
        """Verifica pertenencia con holgura relativa al radio."""
        return abs(point - self.center) <= self.radius * (1 + slack) + slack


def _disk_from_two(a: complex, b: complex) -> Disk:
    return Disk((a + b) / 2, abs(a - b) / 2)


def _disk_from_three(a: complex, b: complex, c: complex) -> Disk:
    """Circunferencia circunscrita; si los puntos son colineales, el par más lejano."""
    ab, ac = b - a, c - a
    det = 2 * (ab.real * ac.imag - ab.imag * ac.real)
    if abs(det) < 1e-300 or abs(det) <= 1e-14 * max(abs(ab), abs(ac)) ** 2:
        return max(
            (_disk_from_two(a, b), _disk_from_two(a, c), _disk_from_two(b, c)),
            key=lambda d: d.radius,
        )
    ab2, ac2 = abs(ab) ** 2, abs(ac) ** 2
    ux = (ac.imag * ab2 - ab.imag * ac2) / det
    uy = (ab.real * ac2 - ac.real * ab2) / det
    center = a + complex(ux, uy)
    return Disk(center, max(abs(center - a), abs(center - b), abs(center - c)))


def smallest_enclosing_disk(points: Sequence[complex] | np.ndarray, seed: int = 0) -> Disk:
    """Disco mínimo que contiene todos los puntos.

    Versión iterativa del algoritmo de Welzl: tiempo esperado lineal tras
    barajar los puntos con una semilla fija.

    Args:
        points: Puntos complejos
        seed: Semilla del barajado

    Returns:
        Disk mínimo
    """
    pts = [complex(p) for p in points]
    if not pts:
        return Disk(0j, 0.0)
    order = np.random.default_rng(seed).permutation(len(pts))
    pts = [pts[i] for i in order]

    disk = Disk(pts[0], 0.0)
    for i in range(1, len(pts)):
        if disk.contains(pts[i]):
            continue
        disk = Disk(pts[i], 0.0)
        for j in range(i):
            if disk.contains(pts[j]):
                continue
            disk = _disk_from_two(pts[i], pts[j])
            for k in range(j):
                if not disk.contains(pts[k]):
                    disk = _disk_from_three(pts[i], pts[j], pts[k])
    return disk

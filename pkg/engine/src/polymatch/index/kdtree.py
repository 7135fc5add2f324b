"""Índices planares sobre valores φ finitos: kd-tree y rejilla uniforme.

Ambos responden consultas por regiones descritas como intersección de
restricciones de disco (dentro o fuera de una circunferencia).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np


@dataclass(frozen=True)
class Box:
    """Caja alineada con los ejes."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float

    @classmethod
    def around(cls, points: np.ndarray) -> Box:
        """Caja mínima de un conjunto de puntos complejos."""
        return cls(
            float(points.real.min()),
            float(points.real.max()),
            float(points.imag.min()),
            float(points.imag.max()),
        )

    def min_distance(self, center: complex) -> float:
        """Distancia mínima de ``center`` a la caja."""
        dx = max(self.xmin - center.real, 0.0, center.real - self.xmax)
        dy = max(self.ymin - center.imag, 0.0, center.imag - self.ymax)
        return math.hypot(dx, dy)

    def max_distance(self, center: complex) -> float:
        """Distancia máxima de ``center`` a la caja."""
        dx = max(abs(center.real - self.xmin), abs(center.real - self.xmax))
        dy = max(abs(center.imag - self.ymin), abs(center.imag - self.ymax))
        return math.hypot(dx, dy)


@dataclass(frozen=True)
class DiskConstraint:
    """Restricción |ξ − center| ≤ radius (inside) o ≥ radius (outside)."""

    center: complex
    radius: float
    inside: bool

    @property
    def slack(self) -> float:
        """Holgura absoluta para podar sin falsos negativos por redondeo."""
        radius = self.radius if math.isfinite(self.radius) else 0.0
        return 1e-9 * (1.0 + abs(self.center) + radius)

    def box_may_satisfy(self, box: Box) -> bool:
        """False solo si ningún punto de la caja puede cumplir la restricción."""
        if self.inside:
            return box.min_distance(self.center) <= self.radius + self.slack
        return box.max_distance(self.center) >= self.radius - self.slack

    def point_may_satisfy(self, point: complex) -> bool:
        """Prueba puntual con la misma holgura."""
        distance = abs(point - self.center)
        if self.inside:
            return distance <= self.radius + self.slack
        return distance >= self.radius - self.slack


class PlanarIndex(Protocol):
    """Interfaz común de kd-tree y rejilla."""

    kind: str

    def query_region(self, constraints: list[DiskConstraint]) -> list[int]: ...


def _all_may_satisfy(constraints: list[DiskConstraint], box: Box) -> bool:
    return all(c.box_may_satisfy(box) for c in constraints)


class KDNode:
    """Nodo del kd-tree: un punto, su índice y la caja de su subárbol."""

    def __init__(self, point: complex, idx: int, box: Box):
        self.point = point
        self.idx = idx
        self.box = box
        self.left: KDNode | None = None
        self.right: KDNode | None = None


class KDTree:
    """kd-tree 2D con división por la mediana alternando ejes."""

    kind = "kdtree"

    def __init__(self, points: np.ndarray, labels: list[int]):
        """Construye el árbol.

        Args:
            points: Array complejo de puntos finitos
            labels: Etiqueta (posición en la colección) de cada punto
        """
        self.points = np.asarray(points, dtype=np.complex128)
        self.labels = list(labels)
        self.coords = np.column_stack([self.points.real, self.points.imag])
        self.root = self._build_tree(np.arange(len(self.points)), 0)

    def __len__(self) -> int:
        return len(self.points)

    def _build_tree(self, point_indices: np.ndarray, depth: int) -> KDNode | None:
        if len(point_indices) == 0:
            return None

        axis = depth % 2
        sorted_idx = point_indices[np.argsort(self.coords[point_indices, axis], kind="stable")]
        median = len(sorted_idx) // 2

        chosen = int(sorted_idx[median])
        node = KDNode(complex(self.points[chosen]), chosen, Box.around(self.points[sorted_idx]))
        node.left = self._build_tree(sorted_idx[:median], depth + 1)
        node.right = self._build_tree(sorted_idx[median + 1 :], depth + 1)
        return node

    def query_region(self, constraints: list[DiskConstraint]) -> list[int]:
        """Etiquetas de los puntos que pueden cumplir todas las restricciones."""
        result: list[int] = []
        stack = [self.root] if self.root is not None else []
        while stack:
            node = stack.pop()
            if not _all_may_satisfy(constraints, node.box):
                continue
            if all(c.point_may_satisfy(node.point) for c in constraints):
                result.append(self.labels[node.idx])
            if node.left is not None:
                stack.append(node.left)
            if node.right is not None:
                stack.append(node.right)
        return sorted(result)

    def query_ball(self, center: complex, radius: float) -> list[int]:
        """Puntos a distancia ≤ radius de ``center``."""
        return self.query_region([DiskConstraint(center, radius, inside=True)])

    def query_annulus(self, center: complex, inner: float, outer: float) -> list[int]:
        """Puntos con inner ≤ |ξ − center| ≤ outer."""
        return self.query_region(
            [
                DiskConstraint(center, outer, inside=True),
                DiskConstraint(center, inner, inside=False),
            ]
        )


class GridIndex:
    """Rejilla uniforme para colecciones pequeñas."""

    kind = "grid"

    def __init__(self, points: np.ndarray, labels: list[int], cells_per_side: int = 8):
        self.points = np.asarray(points, dtype=np.complex128)
        self.labels = list(labels)
        self.cells: dict[tuple[int, int], list[int]] = {}
        if len(self.points) == 0:
            self.bounds = Box(0.0, 0.0, 0.0, 0.0)
            self.step = (1.0, 1.0)
            return

        self.bounds = Box.around(self.points)
        width = max(self.bounds.xmax - self.bounds.xmin, 1e-300)
        height = max(self.bounds.ymax - self.bounds.ymin, 1e-300)
        self.step = (width / cells_per_side, height / cells_per_side)
        for i, p in enumerate(self.points):
            self.cells.setdefault(self._cell_of(complex(p)), []).append(i)

    def __len__(self) -> int:
        return len(self.points)

    def _cell_of(self, p: complex) -> tuple[int, int]:
        return (
            math.floor((p.real - self.bounds.xmin) / self.step[0]),
            math.floor((p.imag - self.bounds.ymin) / self.step[1]),
        )

    def _cell_box(self, key: tuple[int, int]) -> Box:
        x0 = self.bounds.xmin + key[0] * self.step[0]
        y0 = self.bounds.ymin + key[1] * self.step[1]
        return Box(x0, x0 + self.step[0], y0, y0 + self.step[1])

    def query_region(self, constraints: list[DiskConstraint]) -> list[int]:
        """Etiquetas de los puntos que pueden cumplir todas las restricciones."""
        result: list[int] = []
        for key, members in self.cells.items():
            if not _all_may_satisfy(constraints, self._cell_box(key)):
                continue
            for i in members:
                if all(c.point_may_satisfy(complex(self.points[i])) for c in constraints):
                    result.append(self.labels[i])
        return sorted(result)


def build_planar_index(
    points: np.ndarray, labels: list[int], grid_threshold: int = 64
) -> PlanarIndex:
    """kd-tree, o rejilla si hay menos de ``grid_threshold`` puntos."""
    if len(points) < grid_threshold:
        return GridIndex(points, labels)
    return KDTree(points, labels)

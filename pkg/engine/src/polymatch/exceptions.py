"""Errores tipados de polymatch.

Todas las excepciones heredan de ``ValueError`` para que el código que ya
captura errores de valor siga funcionando.
"""

from __future__ import annotations


class PolymatchError(ValueError):
    """Error base del paquete."""


# Geometría e invariantes


class CoincidentPointsError(PolymatchError):
    """Los puntos de anclaje de una similitud coinciden."""


class CollinearSourceError(PolymatchError):
    """Los tres puntos origen de una afinidad son colineales."""


class InvalidAffineError(PolymatchError):
    """La transformación afín es singular (|α|² − |β|² ≈ 0)."""


class BadJError(PolymatchError):
    """Índice j fuera del rango [1, n−1]."""


class BadPermutationError(PolymatchError):
    """La permutación no es una biyección de {1..n}."""


class UndefinedOperandError(PolymatchError):
    """Operando indefinido (polígono en el conjunto nulo N)."""


class ZeroAlphaError(PolymatchError):
    """El coeficiente α de la afinidad es cero."""


class SizeMismatchError(PolymatchError):
    """Los polígonos comparados tienen distinto número de vértices."""


class AllTriplesCollinearError(PolymatchError):
    """Ninguna terna de vértices del polígono es no colineal."""


# Índice


class PolygonIndexError(PolymatchError):
    """Error base del índice de polígonos."""


class EmptyCollectionError(PolygonIndexError):
    """La colección a indexar está vacía."""


class MixedSizesError(PolygonIndexError):
    """La colección mezcla polígonos con distinto n."""


class NeedsMultipleJError(PolygonIndexError):
    """El filtrado multi-firma necesita al menos dos valores de j."""


class IndexFormatError(PolygonIndexError):
    """El fichero de índice no tiene el formato esperado."""


class IndexIntegrityError(PolygonIndexError):
    """Las firmas almacenadas no coinciden con las recalculadas."""


# Ruido en triángulos


class NoiseDomainError(PolymatchError):
    """Entrada fuera del dominio del análisis de ruido."""


class DegenerateTriangleError(NoiseDomainError):
    """Triángulo degenerado (vértices colineales)."""


class NegativeOrientationError(NoiseDomainError):
    """Triángulo orientado negativamente."""


class ROutOfRangeError(NoiseDomainError):
    """Radio de perturbación fuera de (0, √3/6)."""


class CoincidentBaseError(NoiseDomainError):
    """z1 = z2: la base del triángulo es nula."""


class PoleInRegionError(NoiseDomainError):
    """La región de τ contiene el polo de M."""


# Entrada de datos


class RecordFormatError(PolymatchError):
    """Registro de entrada mal formado.

    Attributes:
        line: Número de línea (1-based) del registro, si se conoce
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"línea {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class PlantSpecError(PolymatchError):
    """Especificación de plantado inválida en el generador."""

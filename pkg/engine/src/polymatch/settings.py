"""Gestión de configuración usando pydantic-settings."""

from __future__ import annotations

from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Configuración global de polymatch.

    Cada campo puede fijarse con una variable de entorno ``POLYMATCH_<CAMPO>``
    o en un archivo ``.env``; los flags de la CLI tienen prioridad.
    """

    model_config = SettingsConfigDict(
        env_prefix="POLYMATCH_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # Consultas
    tol: float = Field(default=1e-6, ge=0, description="Tolerancia de emparejamiento")
    cell: float = Field(default=1e-6, gt=0, description="Tamaño de celda del hash de firmas")
    j_set: list[int] = Field(default=[1], min_length=1, description="Índices j indexados")

    # Índice
    grid_threshold: int = Field(
        default=64, ge=0, description="Por debajo de este tamaño se usa rejilla en vez de kd-tree"
    )
    integrity_fraction: float = Field(
        default=0.01, gt=0, le=1, description="Fracción de firmas recomprobadas al cargar"
    )

    # Ruido
    samples: int = Field(default=1024, ge=16, description="Muestras del borde de la elipse de τ")
    seed: int = Field(default=0, description="Semilla de generación y muestreo")

    # Logging
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="INFO", description="Nivel de logging"
    )
    log_file: Path | None = Field(default=None, description="Archivo de logs (opcional)")


# Singleton para acceso global
_settings: Settings | None = None


def get_settings() -> Settings:
    """Obtener instancia única de Settings (singleton)."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Descarta el singleton (los tests cambian el entorno)."""
    global _settings
    _settings = None

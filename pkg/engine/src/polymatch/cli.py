"""Línea de comandos de polymatch.

Comandos: build, query-sim, query-affine, query-pair, gen y noise-bound.
La salida estándar solo lleva resultados JSON; los logs van a stderr.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from loguru import logger

from . import __version__
from .data import (
    DataLoader,
    DataValidator,
    MatchRecord,
    PlantSpec,
    PolygonGenerator,
    TransformRecord,
    dumps,
)
from .exceptions import (
    EmptyCollectionError,
    MixedSizesError,
    NoiseDomainError,
    PolygonIndexError,
    PolymatchError,
    SizeMismatchError,
)
from .index import PolygonIndex
from .invariants import phi_nj
from .models import AffineMap, CandidateSet, MatchResult, Polygon
from .noise import equilateral_bound, phi_noise_disk
from .settings import Settings, get_settings

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SCHEMA = 3
EXIT_MISMATCH = 4
EXIT_DOMAIN = 5

EQUILATERAL_TOL = 1e-9


def exit_code_for(error: Exception) -> int:
    """Código de salida para una excepción."""
    if isinstance(error, NoiseDomainError):
        return EXIT_DOMAIN
    if isinstance(error, SizeMismatchError):
        return EXIT_MISMATCH
    if isinstance(error, EmptyCollectionError):
        return EXIT_INPUT
    if isinstance(error, PolygonIndexError):
        return EXIT_SCHEMA
    return EXIT_INPUT


def configure_logging(settings: Settings) -> None:
    """Instala los sinks de loguru: stderr y, opcionalmente, un archivo rotado."""
    logger.remove()
    logger.add(
        sys.stderr,
        level=settings.log_level,
        format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {message}",
    )
    if settings.log_file is not None:
        logger.add(settings.log_file, level="DEBUG", rotation="10 MB", encoding="utf-8")


# Conversión de argumentos


def parse_complex(text: str) -> complex:
    """``"re,im"`` → complejo."""
    try:
        re_part, im_part = (float(part) for part in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"se esperaba 're,im', recibido '{text}'") from e
    return complex(re_part, im_part)


def parse_j_set(text: str) -> list[int]:
    """``"1,2"`` → [1, 2]."""
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"lista de j inválida: '{text}'") from e
    if not values:
        raise argparse.ArgumentTypeError("la lista de j está vacía")
    return values


def _pair(z: complex) -> tuple[float, float]:
    return (z.real, z.imag)


def match_record(query_id: str, match: MatchResult) -> MatchRecord:
    """Registro de salida de un emparejamiento verificado."""
    f = match.as_affine()
    return MatchRecord(
        query_id=query_id,
        match_id=match.candidate_id,
        shift=match.shift,
        transform=TransformRecord(alpha=_pair(f.alpha), beta=_pair(f.beta), gamma=_pair(f.gamma)),
        residual=match.residual,
    )


def _emit(record: object) -> None:
    sys.stdout.write(dumps(record) + "\n")


def _emit_stats(
    query_id: str, candidates: int, verified: int, result: CandidateSet | None = None
) -> None:
    stats: dict[str, object] = {
        "query_id": query_id,
        "candidates": candidates,
        "verified": verified,
    }
    if result is not None:
        stats["probes"] = result.probes
        stats["extra_probes"] = result.extra_probes
    sys.stderr.write(dumps({"stats": stats}) + "\n")


def _loader(settings: Settings) -> DataLoader:
    return DataLoader(integrity_fraction=settings.integrity_fraction, seed=settings.seed)


# Comandos


def cmd_build(args: argparse.Namespace, settings: Settings) -> int:
    """Lee una colección JSONL, construye el índice y lo guarda."""
    loader = _loader(settings)
    polygons = loader.read_polygons(args.input)
    if not polygons:
        raise EmptyCollectionError(f"No hay polígonos en {args.input}")
    DataValidator.validate(polygons, strict=True)
    if args.n is not None and polygons[0].n != args.n:
        raise MixedSizesError(f"Se pidió n={args.n}, la colección tiene n={polygons[0].n}")

    index = PolygonIndex(
        polygons, args.j or settings.j_set, cell=args.cell, grid_threshold=settings.grid_threshold
    )
    loader.save_index(index, args.output)
    _emit(
        {
            "m": len(index),
            "n": index.n,
            "j_set": index.j_set,
            "planar": index.planar.kind,
            "histogram": index.stats().to_dict(orient="records"),
        }
    )
    return EXIT_OK


def _query_similarity(
    index: PolygonIndex, query: Polygon, args: argparse.Namespace
) -> CandidateSet:
    if args.multi_j:
        return index.multi_signature_filter(query, args.tol)
    return index.query_similarity(query, args.tol)


def cmd_query_sim(args: argparse.Namespace, settings: Settings) -> int:
    """Consultas por similitud (con filtrado multi-j opcional)."""
    loader = _loader(settings)
    index = loader.load_index(args.index)
    for query in loader.iter_polygons(args.query):
        result = _query_similarity(index, query, args)
        for match in result.verified:
            _emit(match_record(query.id, match))
        if args.stats:
            _emit_stats(query.id, len(result.ids), len(result.verified), result)
    return EXIT_OK


def cmd_query_affine(args: argparse.Namespace, settings: Settings) -> int:
    """Consultas con afinidad conocida f(z) = αz + βz̄ + γ."""
    loader = _loader(settings)
    index = loader.load_index(args.index)
    f = AffineMap(alpha=args.alpha, beta=args.beta, gamma=args.gamma)
    for query in loader.iter_polygons(args.query):
        result = index.query_known_affine(query, f, args.tol)
        for match in result.verified:
            _emit(match_record(query.id, match))
        if args.stats:
            _emit_stats(query.id, len(result.ids), len(result.verified))
    return EXIT_OK


def cmd_query_pair(args: argparse.Namespace, settings: Settings) -> int:
    """Consultas de pares: la línea i de cada archivo forma un par de consulta."""
    loader = _loader(settings)
    index = loader.load_index(args.index)
    firsts = loader.read_polygons(args.query)
    seconds = loader.read_polygons(args.query2)
    if len(firsts) != len(seconds):
        raise PolymatchError(
            f"Los archivos de consulta tienen distinto tamaño: {len(firsts)} y {len(seconds)}"
        )
    for query, query2 in zip(firsts, seconds):
        result = index.query_pair(query, query2, args.tol)
        for pair in result.verified:
            f = pair.transform
            _emit(
                MatchRecord(
                    query_id=f"{query.id}+{query2.id}",
                    match_id=list(pair.candidate_ids),
                    shift=list(pair.shifts),
                    transform=TransformRecord(
                        alpha=_pair(f.alpha), beta=_pair(f.beta), gamma=_pair(f.gamma)
                    ),
                    residual=pair.residual,
                )
            )
        if args.stats:
            _emit_stats(f"{query.id}+{query2.id}", len(result.ids), len(result.verified))
    return EXIT_OK


def cmd_gen(args: argparse.Namespace, settings: Settings) -> int:
    """Genera una colección aleatoria con copias plantadas."""
    if args.count < 1:
        raise PolymatchError(f"count debe ser ≥ 1, recibido {args.count}")
    plants = [PlantSpec.parse(text) for text in args.plant]
    collection = PolygonGenerator(args.n, seed=args.seed).generate(args.count, plants)

    loader = _loader(settings)
    loader.write_polygons(collection.polygons, args.output)
    truth_path = args.truth
    if truth_path is None and str(args.output) != "-" and collection.truth:
        truth_path = Path(f"{args.output}.truth.jsonl")
    if truth_path is not None:
        Path(truth_path).parent.mkdir(parents=True, exist_ok=True)
        with open(truth_path, "w", encoding="utf-8") as f:
            loader.write_jsonl(collection.truth, f)
        logger.info(f"Verdad de referencia guardada en {truth_path}")
    return EXIT_OK


def cmd_noise_bound(args: argparse.Namespace, settings: Settings) -> int:
    """Informe de regiones de ruido para un triángulo."""
    x1, y1, x2, y2, x3, y3 = args.triangle
    z1, z2, z3 = complex(x1, y1), complex(x2, y2), complex(x3, y3)
    region = phi_noise_disk(z1, z2, z3, args.r, samples=args.samples)

    triangle = Polygon(id="triangle", vertices=(z1, z2, z3))
    phi = phi_nj(triangle, 1)
    is_equilateral = phi is not None and abs(phi) <= EQUILATERAL_TOL
    ellipse = region.tau_ellipse
    _emit(
        {
            "triangle": [_pair(z) for z in (z1, z2, z3)],
            "r": args.r,
            "equilateral_bound": equilateral_bound(args.r) if is_equilateral else None,
            "tau_ellipse": {
                "center": _pair(ellipse.center),
                "major_axis_length": ellipse.major_axis_length,
                "minor_axis_length": ellipse.minor_axis_length,
                "angle": ellipse.angle,
            },
            "phi_disk": {"center": _pair(region.phi_center), "radius": region.phi_radius},
            "samples": args.samples,
        }
    )
    return EXIT_OK


# Parser


def _add_query_flags(parser: argparse.ArgumentParser, settings: Settings) -> None:
    parser.add_argument("index", type=Path, help="Archivo de índice JSON")
    parser.add_argument("query", help="Consultas JSONL ('-' para stdin)")
    parser.add_argument("--tol", type=float, default=settings.tol, help="Tolerancia")
    parser.add_argument("--stats", action="store_true", help="Recuentos de candidatos en stderr")


def build_parser(settings: Settings | None = None) -> argparse.ArgumentParser:
    """Parser de argumentos con valores por defecto tomados de Settings."""
    settings = settings or get_settings()
    parser = argparse.ArgumentParser(
        prog="polymatch", description="Búsqueda de polígonos por similitud y afinidad."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=None,
        help="Nivel de logging (por defecto POLYMATCH_LOG_LEVEL)",
    )
    parser.add_argument("--log-file", type=Path, default=None, help="Archivo de logs adicional")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="Construir y guardar un índice")
    build.add_argument("input", help="Colección JSONL ('-' para stdin)")
    build.add_argument("-o", "--output", type=Path, required=True, help="Archivo de índice")
    build.add_argument("--n", type=int, default=None, help="n esperado")
    build.add_argument("--j", type=parse_j_set, default=None, help="Valores de j, p. ej. '1,2'")
    build.add_argument("--cell", type=float, default=settings.cell, help="Tamaño de celda")
    build.set_defaults(handler=cmd_build)

    sim = sub.add_parser("query-sim", help="Consulta por similitud")
    _add_query_flags(sim, settings)
    sim.add_argument("--multi-j", action="store_true", help="Intersecar candidatos de todos los j")
    sim.set_defaults(handler=cmd_query_sim)

    affine = sub.add_parser("query-affine", help="Consulta con afinidad conocida")
    _add_query_flags(affine, settings)
    affine.add_argument("--alpha", type=parse_complex, required=True, help="α como 're,im'")
    affine.add_argument("--beta", type=parse_complex, default=0j, help="β como 're,im'")
    affine.add_argument("--gamma", type=parse_complex, default=0j, help="γ como 're,im'")
    affine.set_defaults(handler=cmd_query_affine)

    pair = sub.add_parser("query-pair", help="Consulta de pares con afinidad desconocida")
    _add_query_flags(pair, settings)
    pair.add_argument("query2", help="Segundas consultas JSONL")
    pair.set_defaults(handler=cmd_query_pair)

    gen = sub.add_parser("gen", help="Generar una colección sintética")
    gen.add_argument("--count", "-m", type=int, required=True, help="Polígonos aleatorios")
    gen.add_argument("--n", type=int, required=True, help="Vértices por polígono")
    gen.add_argument("--seed", type=int, default=settings.seed, help="Semilla")
    gen.add_argument(
        "--plant", action="append", default=[], help="Copias plantadas, p. ej. 'similarity:3'"
    )
    gen.add_argument("-o", "--output", default="-", help="Salida JSONL ('-' para stdout)")
    gen.add_argument("--truth", type=Path, default=None, help="Archivo de verdad de referencia")
    gen.set_defaults(handler=cmd_gen)

    noise = sub.add_parser("noise-bound", help="Regiones de ruido de un triángulo")
    noise.add_argument(
        "--triangle",
        type=float,
        nargs=6,
        required=True,
        metavar=("X1", "Y1", "X2", "Y2", "X3", "Y3"),
        help="Vértices del triángulo",
    )
    noise.add_argument("--r", type=float, required=True, help="Radio de ruido en (0, √3/6)")
    noise.add_argument("--samples", type=int, default=settings.samples, help="Muestras del borde")
    noise.set_defaults(handler=cmd_noise_bound)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Punto de entrada de la CLI; devuelve el código de salida."""
    settings = get_settings()
    parser = build_parser(settings)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT

    overrides = {
        key: value
        for key, value in (("log_level", args.log_level), ("log_file", args.log_file))
        if value is not None
    }
    if overrides:
        settings = settings.model_copy(update=overrides)
    configure_logging(settings)

    handler: Callable[[argparse.Namespace, Settings], int] = args.handler
    try:
        return handler(args, settings)
    except (ValueError, OSError) as e:
        code = exit_code_for(e)
        logger.error(f"{args.command}: {e}")
        return code


if __name__ == "__main__":
    sys.exit(main())

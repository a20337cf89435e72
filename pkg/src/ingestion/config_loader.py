"""
Analysis config files and environment defaults
"""
import configparser
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from dotenv import load_dotenv

from ..core.errors import ConfigError
from .cell_mapper import GridSpec
from .vector_field import ApproxParams, VectorFieldSpec

# Load environment variables
load_dotenv()

CHECKS = ("ends", "limits", "complete", "thm66", "separation", "compactness", "basins", "duality")
DEFAULT_CHECKS = ("ends", "limits", "complete", "thm66")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

ALLOWED_KEYS: Dict[str, Tuple[str, ...]] = {
    "field": ("family", "matrix", "height", "components"),
    "grid": ("lower", "upper", "resolution"),
    "approx": ("tau", "substeps", "bloat", "samples"),
    "analysis": ("checks", "depth", "seed", "walks", "steps"),
}


@dataclass
class Settings:
    """Environment defaults; CLI flags override them"""
    log_level: str = "INFO"
    log_file: Optional[str] = None
    max_depth: int = 512
    output_dir: str = "output"


@dataclass
class AnalysisConfig:
    field_spec: VectorFieldSpec
    grid: GridSpec
    approx: ApproxParams
    checks: List[str] = field(default_factory=lambda: list(DEFAULT_CHECKS))
    depth: Optional[int] = None
    seed: int = 0
    walks: int = 100
    steps: int = 64
    source: str = ""


def load_settings() -> Settings:
    """Read EFL_* environment variables (a .env file is honoured)"""
    raw_depth = os.getenv("EFL_MAX_DEPTH", "512")
    try:
        max_depth = int(raw_depth)
    except ValueError:
        raise ConfigError("EFL_MAX_DEPTH", f"expected an integer, got {raw_depth!r}")
    if max_depth < 1:
        raise ConfigError("EFL_MAX_DEPTH", f"must be at least 1, got {max_depth}")
    log_level = os.getenv("EFL_LOG_LEVEL", "INFO").upper()
    if log_level not in LOG_LEVELS:
        raise ConfigError("EFL_LOG_LEVEL", f"expected one of {', '.join(LOG_LEVELS)}, got {log_level!r}")
    return Settings(
        log_level=log_level,
        log_file=os.getenv("EFL_LOG_FILE") or None,
        max_depth=max_depth,
        output_dir=os.getenv("EFL_OUTPUT_DIR", "output"),
    )


def _numbers(text: str, key: str, kind=float) -> List:
    try:
        return [kind(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(key, f"expected a comma separated list of numbers, got {text!r}")


def _integer(text: str, key: str, minimum: int = 0) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {text!r}")
    if value < minimum:
        raise ConfigError(key, f"must be at least {minimum}, got {value}")
    return value


def _float(text: str, key: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {text!r}")


def _require(section: configparser.SectionProxy, name: str) -> str:
    if name not in section:
        raise ConfigError(f"{section.name}.{name}", "missing required key")
    return section[name]


def _field_spec(section: configparser.SectionProxy, dim: int) -> VectorFieldSpec:
    family = _require(section, "family").strip()
    if family == "linear":
        rows = [_numbers(row, "field.matrix") for row in _require(section, "matrix").split(";")]
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise ConfigError("field.matrix", f"expected a {dim}x{dim} matrix")
        return VectorFieldSpec.linear(rows)
    if family == "gradient_descent":
        return VectorFieldSpec.gradient_descent(_require(section, "height"), dim)
    if family == "custom":
        parts = [p for p in _require(section, "components").split(";") if p.strip()]
        if len(parts) != dim:
            raise ConfigError("field.components", f"expected {dim} components, got {len(parts)}")
        return VectorFieldSpec.custom(parts)
    if family == "radial_cycle":
        return VectorFieldSpec.radial_cycle()
    raise ConfigError("field.family", f"unknown family {family!r}")


def parse_config(text: str, source: str = "<string>") -> AnalysisConfig:
    """
    Parse an analysis config

    Args:
        text: Config file content ([field], [grid], [approx], [analysis])
        source: Path or label used in log lines

    Returns:
        AnalysisConfig

    Raises:
        ConfigError: malformed content, unknown sections or keys, bad values
    """
    parser = configparser.ConfigParser(comment_prefixes=("#",), inline_comment_prefixes=("#",),
                                       interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError("config", str(exc).splitlines()[0])

    for name in parser.sections():
        if name not in ALLOWED_KEYS:
            raise ConfigError(name, "unknown section")
        for key in parser[name]:
            if key not in ALLOWED_KEYS[name]:
                raise ConfigError(f"{name}.{key}", "unknown key")
    for name in ("field", "grid", "approx"):
        if not parser.has_section(name):
            raise ConfigError(name, "missing section")

    grid_section = parser["grid"]
    grid = GridSpec(
        lower=tuple(_numbers(_require(grid_section, "lower"), "grid.lower")),
        upper=tuple(_numbers(_require(grid_section, "upper"), "grid.upper")),
        resolution=tuple(_numbers(_require(grid_section, "resolution"), "grid.resolution", int)),
    )
    field_spec = _field_spec(parser["field"], grid.dim)

    approx_section = parser["approx"]
    bloat = approx_section.get("bloat")
    approx = ApproxParams(
        tau=_float(_require(approx_section, "tau"), "approx.tau"),
        substeps=_integer(approx_section.get("substeps", "20"), "approx.substeps", 1),
        bloat=_float(bloat, "approx.bloat") if bloat is not None else None,
        samples=approx_section.get("samples", "corners_center").strip(),
    )

    config = AnalysisConfig(field_spec=field_spec, grid=grid, approx=approx, source=source)
    if parser.has_section("analysis"):
        analysis = parser["analysis"]
        if "checks" in analysis:
            checks = [c.strip() for c in analysis["checks"].split(",") if c.strip()]
            unknown = [c for c in checks if c not in CHECKS]
            if unknown or not checks:
                raise ConfigError("analysis.checks", f"unknown or empty checks {unknown}; known: {', '.join(CHECKS)}")
            config.checks = checks
        if "depth" in analysis:
            config.depth = _integer(analysis["depth"], "analysis.depth", 1)
        config.seed = _integer(analysis.get("seed", "0"), "analysis.seed")
        config.walks = _integer(analysis.get("walks", "100"), "analysis.walks", 1)
        config.steps = _integer(analysis.get("steps", "64"), "analysis.steps", 1)
    logging.info(f"Loaded config {source}: {field_spec.family} field on {grid.resolution} grid, checks {config.checks}")
    return config


def load_config(path: str) -> AnalysisConfig:
    if not os.path.exists(path):
        raise ConfigError("config", f"file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        return parse_config(f.read(), source=path)

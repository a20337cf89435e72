from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..core.errors import ConfigError
from ..ingestion.config_loader import CHECKS


@dataclass
class AnalysisJob:
    fixture: Optional[str] = None
    n: Optional[int] = None
    config_path: Optional[Path] = None
    checks: List[str] = field(default_factory=lambda: ["ends", "limits", "complete"])
    json_path: Optional[Path] = None
    dot_path: Optional[Path] = None
    dynamics_dot_path: Optional[Path] = None
    depth: Optional[int] = None  # falls back to EFL_MAX_DEPTH
    seed: int = 0
    walks: int = 100
    steps: int = 64

    def validate(self) -> None:
        if (self.fixture is None) == (self.config_path is None):
            raise ConfigError("source", "give exactly one of a fixture name or a config path")
        if not self.checks:
            raise ConfigError("checks", "at least one check is required")
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ConfigError("checks", f"unknown checks {unknown}")
        if self.depth is not None and self.depth < 1:
            raise ConfigError("depth", f"must be at least 1, got {self.depth}")


@dataclass
class AnalysisResult:
    report: Dict[str, Any]
    json_path: Optional[Path] = None
    dot_path: Optional[Path] = None
    dynamics_dot_path: Optional[Path] = None

    @property
    def results(self) -> Dict[str, Any]:
        return self.report["results"]

"""
exflow SDK

Public API:
- analyze_fixture(name, n=None, checks=...) -> dict
- analyze(job: AnalysisJob) -> AnalysisResult

Reports follow the exflow-report/1 schema documented in USAGE.txt.
"""
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from ..core.output_manager import component_tree_dot, dynamics_dot, write_json_report, write_text
from ..core.pipeline_processor import analyze as run_analysis
from ..core.pipeline_processor import fixture_from_config
from ..ingestion.config_loader import load_config, load_settings
from ..ingestion.gallery import Fixture, gallery
from .types import AnalysisJob, AnalysisResult


def analyze_fixture(
    name: str,
    n: Optional[int] = None,
    checks: Sequence[str] = ("ends", "limits", "complete"),
    *,
    depth: Optional[int] = None,
    seed: int = 0,
) -> Dict[str, Any]:
    """Run checks on a gallery fixture and return the report dict.

    Parameters
    ----------
    name: str
        Fixture name, see ``src.ingestion.gallery.list_fixtures``.
    n: int | None
        Size parameter of parametric fixtures.
    checks: sequence of str
        Checks to run, reported in this order.

    Returns
    -------
    dict
        Report with schema, fixture, space, tower and results.
    """
    max_depth = depth or load_settings().max_depth
    fixture = gallery(name, n, max_depth)
    return run_analysis(fixture, checks, seed=seed, max_depth=max_depth)


def load_subject(job: AnalysisJob) -> Fixture:
    """Fixture or config-built subject of a job"""
    max_depth = job.depth or load_settings().max_depth
    if job.fixture is not None:
        return gallery(job.fixture, job.n, max_depth)
    return fixture_from_config(load_config(str(job.config_path)), max_depth)


def analyze(job: AnalysisJob) -> AnalysisResult:
    """Typed API: validate the job, run it and write the requested files."""
    job.validate()
    max_depth = job.depth or load_settings().max_depth
    subject = load_subject(job)
    report = run_analysis(subject, job.checks, seed=job.seed, walks=job.walks, steps=job.steps,
                          max_depth=max_depth)
    result = AnalysisResult(report=report)
    if job.json_path is not None:
        write_json_report(report, str(job.json_path))
        result.json_path = Path(job.json_path)
    if job.dot_path is not None and subject.tower is not None:
        write_text(component_tree_dot(subject.space, subject.tower), str(job.dot_path))
        result.dot_path = Path(job.dot_path)
    if job.dynamics_dot_path is not None and subject.cell_map is not None:
        write_text(dynamics_dot(subject.cell_map), str(job.dynamics_dot_path))
        result.dynamics_dot_path = Path(job.dynamics_dot_path)
    return result


__all__ = ["analyze_fixture", "analyze", "load_subject", "AnalysisJob", "AnalysisResult"]

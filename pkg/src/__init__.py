"""
Exterior Flow Engine

Finite models of exterior spaces and flows: limit sets, ends and
C0-completions of towers of open sets, and the limit-set theorems for
discrete dynamics on cell complexes.

This package provides:
- Finite T0 spaces with dense atom-set algebra and cubical grid builders
- Towers of exterior open sets, limit and bar-limit sets, component trees and ends
- C0-completions with their G0 topology and completeness checkers
- Cell maps: limit sets, recurrence classes, attractors, absorbing towers and basins
- Outer approximations of ODE time-tau maps and a deterministic fixture gallery

Example:
    >>> from src import gallery, check_thm66
    >>> fixture = gallery("morse-circle", 16)
    >>> check_thm66(fixture.space, fixture.cell_map).complete
    True

Modules:
- core.finite_space: atoms, minimal opens, closure/interior/star, components, grids
- core.externology: towers, limit sets, component trees, ends, net classification
- core.completion: C0-completions and the completeness/separation/compactness checks
- dynamics.semiflow: cell maps, limit sets, attraction, r-exterior towers, basins
- dynamics.flow_completion: right/left completions, convergence, limit theorem checks
- ingestion: vector fields, cell maps from ODEs, gallery and config loading
- core.pipeline_processor: orchestrator; core.output_manager: JSON/DOT export
"""

__version__ = "1.0.0"
__author__ = "Exterior Flow Team"
__license__ = "MIT"

# Import main functions for easy access
from .core.finite_space import FiniteSpace, AtomSet, build_grid_space
from .core.externology import Tower, Tail, limit_sets, end_space
from .core.completion import build_completion, check_c0_complete
from .core.pipeline_processor import analyze, process_gallery
from .dynamics.semiflow import CellMap, r_exterior_tower
from .dynamics.flow_completion import check_thm66, complete_flow
from .ingestion.gallery import gallery, list_fixtures
from .core.output_manager import write_json_report

__all__ = [
    'FiniteSpace',
    'AtomSet',
    'build_grid_space',
    'Tower',
    'Tail',
    'limit_sets',
    'end_space',
    'build_completion',
    'check_c0_complete',
    'analyze',
    'process_gallery',
    'CellMap',
    'r_exterior_tower',
    'check_thm66',
    'complete_flow',
    'gallery',
    'list_fixtures',
    'write_json_report'
]

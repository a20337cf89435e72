"""
Core functionality: finite spaces, towers and completions.
The orchestrator (pipeline_processor) and report writers (output_manager)
live here as well and are imported explicitly.
"""

from .errors import ExflowError
from .finite_space import FiniteSpace, AtomSet, components, build_grid_space
from .externology import Tower, Tail, validate_tower, limit_sets, end_space
from .completion import Completion, build_completion, check_c0_complete

__all__ = [
    'ExflowError',
    'FiniteSpace',
    'AtomSet',
    'components',
    'build_grid_space',
    'Tower',
    'Tail',
    'validate_tower',
    'limit_sets',
    'end_space',
    'Completion',
    'build_completion',
    'check_c0_complete'
]

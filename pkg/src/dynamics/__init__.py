"""
Discrete dynamics on top cells and the completions of cell flows.
"""

from .semiflow import CellMap, omega_limit, classify_cells, r_exterior_tower, basin_decomposition
from .flow_completion import complete_flow, check_thm66, duality_check

__all__ = [
    'CellMap',
    'omega_limit',
    'classify_cells',
    'r_exterior_tower',
    'basin_decomposition',
    'complete_flow',
    'check_thm66',
    'duality_check'
]

"""
Inputs: ODE vector fields, outer-approximated cell maps, the fixture
gallery and analysis config files.
"""

from .vector_field import VectorFieldSpec, ApproxParams, time_tau_map
from .cell_mapper import GridSpec, build_cell_map
from .gallery import Fixture, gallery, list_fixtures
from .config_loader import load_config, parse_config, load_settings

__all__ = [
    'VectorFieldSpec',
    'ApproxParams',
    'time_tau_map',
    'GridSpec',
    'build_cell_map',
    'Fixture',
    'gallery',
    'list_fixtures',
    'load_config',
    'parse_config',
    'load_settings'
]

"""
Utility modules and helper functions.
Contains the networkx graph helpers.
"""

from .graph_tools import specialization_digraph, spaces_isomorphic, cyclic_nodes

__all__ = [
    'specialization_digraph',
    'spaces_isomorphic',
    'cyclic_nodes'
]

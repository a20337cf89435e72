"""
networkx helpers shared by the topology and dynamics layers
"""
from typing import Iterable, List, Set

import networkx as nx


def specialization_digraph(space) -> nx.DiGraph:
    """Edge x -> y whenever y lies in U_x and y != x"""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(space)))
    for x, up in enumerate(space.min_open):
        graph.add_edges_from((x, y) for y in up if y != x)
    return graph


def spaces_isomorphic(first, second) -> bool:
    """
    Homeomorphism test for finite T0 spaces

    Spaces carrying the same atom names and minimal opens are compared
    directly; otherwise their specialization digraphs are tested for
    isomorphism.
    """
    if len(first) != len(second):
        return False
    if first.atoms == second.atoms and first.min_open == second.min_open:
        return True
    return nx.is_isomorphic(specialization_digraph(first), specialization_digraph(second))


def cyclic_nodes(graph: nx.DiGraph) -> Set[int]:
    """Nodes lying on a directed cycle (self-loops included)"""
    nodes = set(nx.nodes_with_selfloops(graph))
    for scc in nx.strongly_connected_components(graph):
        if len(scc) > 1:
            nodes |= scc
    return nodes


def ancestors_inclusive(graph: nx.DiGraph, targets: Iterable[int]) -> Set[int]:
    """All nodes with a (possibly empty) path into the target set"""
    targets = list(targets)
    return set().union(targets, *(nx.ancestors(graph, t) for t in targets))


def find_cycle_nodes(graph: nx.DiGraph) -> List[int]:
    """Nodes of some directed cycle, empty when the graph is acyclic"""
    try:
        edges = nx.find_cycle(graph, orientation="original")
    except nx.NetworkXNoCycle:
        return []
    return [edge[0] for edge in edges]

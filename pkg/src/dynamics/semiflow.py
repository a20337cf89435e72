"""
Discrete-time dynamics on top cells: limit sets, recurrence classes,
attraction regions, absorbing (r-exterior) sets and towers, reversal,
trajectory ends and basins
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

import networkx as nx
import numpy as np

from ..core.errors import ExflowError, InsufficientHorizon, NotATopCell, NotOpen
from ..core.externology import DEFAULT_MIN_TAIL, EndPoint, Tail, Tower, end_space, settle_index
from ..core.finite_space import AtomSet, FiniteSpace, adjacent_cells
from ..utils.graph_tools import ancestors_inclusive, cyclic_nodes, find_cycle_nodes

EXIT = "Exit"
DEFAULT_MAX_DEPTH = 512


class CellMap:
    """
    Multivalued self-map on the top cells of a space.

    Each cell carries a set of image cells and possibly the Exit marker
    (some orbit through it leaves the modelled window). A cell without
    images always exits.
    """

    def __init__(self, space: FiniteSpace, images: Mapping[int, Iterable[int]],
                 exits: Iterable[int] = ()):
        self.space = space
        table: Dict[int, FrozenSet[int]] = {}
        for cell in space.cells:
            targets = frozenset(int(d) for d in images.get(cell, ()))
            for d in targets:
                _require_cell(space, d)
            table[cell] = targets
        for cell in images:
            _require_cell(space, cell)
        exit_cells = {int(c) for c in exits}
        for cell in exit_cells:
            _require_cell(space, cell)
        exit_cells |= {c for c, targets in table.items() if not targets}
        self.images = table
        self.exits: FrozenSet[int] = frozenset(exit_cells)

        src = [c for c in space.cells for _ in table[c]]
        dst = [d for c in space.cells for d in sorted(table[c])]
        self._src = np.array(src, dtype=np.int64)
        self._dst = np.array(dst, dtype=np.int64)

    @classmethod
    def from_names(cls, space: FiniteSpace, table: Mapping[str, Union[str, Iterable[str]]]) -> "CellMap":
        """Build from {cell: [image names]} where 'Exit' marks leaving orbits"""
        images, exits = {}, set()
        for source, targets in table.items():
            if isinstance(targets, str):
                targets = [targets]
            cell = space.atom(source)
            images[cell] = [space.atom(t) for t in targets if t != EXIT]
            if EXIT in targets:
                exits.add(cell)
        return cls(space, images, exits)

    def __repr__(self) -> str:
        return f"CellMap(cells={len(self.images)}, edges={len(self._src)}, exits={len(self.exits)})"

    def image(self, cell: int) -> FrozenSet[int]:
        return self.images[cell]

    def exits_at(self, cell: int) -> bool:
        return cell in self.exits

    def edges(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset(zip(self._src.tolist(), self._dst.tolist()))

    def is_single_valued(self) -> bool:
        return all(len(t) <= 1 for t in self.images.values())

    def image_of(self, cells: AtomSet) -> AtomSet:
        mask = np.zeros(len(self.space), dtype=bool)
        mask[self._dst[cells.mask[self._src]]] = True
        return AtomSet(mask)

    def preimage_of(self, cells: AtomSet) -> AtomSet:
        mask = np.zeros(len(self.space), dtype=bool)
        mask[self._src[cells.mask[self._dst]]] = True
        return AtomSet(mask)

    @cached_property
    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.space.cells)
        graph.add_edges_from(zip(self._src.tolist(), self._dst.tolist()))
        return graph

    def to_names(self) -> Dict[str, List[str]]:
        names = self.space.atoms
        table = {}
        for cell in self.space.cells:
            targets = [names[d] for d in sorted(self.images[cell])]
            if cell in self.exits:
                targets.append(EXIT)
            table[names[cell]] = targets
        return table


@dataclass(frozen=True)
class OrbitSample:
    start: int
    walk: Tuple[int, ...]
    exited: bool = False

    def is_valid(self, cell_map: CellMap) -> bool:
        steps_ok = all(b in cell_map.image(a) for a, b in zip(self.walk, self.walk[1:]))
        return steps_ok and self.walk[0] == self.start and (not self.exited or cell_map.exits_at(self.walk[-1]))


@dataclass
class CellClassification:
    critical: AtomSet
    periodic: AtomSet
    poisson: AtomSet


@dataclass
class AttractionReport:
    a_weak: AtomSet
    a_strong: AtomSet
    is_weak_attractor: bool
    is_attractor: bool
    is_global_weak: bool
    is_global: bool


@dataclass
class ExteriorCertificate:
    is_exterior: bool
    entry_times: Dict[str, int] = field(default_factory=dict)
    cycle: List[str] = field(default_factory=list)
    escaping_edge: Optional[Tuple[str, str]] = None

    @property
    def max_entry_time(self) -> int:
        return max(self.entry_times.values(), default=0)


@dataclass
class BasinReport:
    basins: Dict[str, AtomSet]
    ambiguous: AtomSet


def _require_cell(space: FiniteSpace, cell: int) -> None:
    if not space.is_cell(cell):
        name = space.atoms[cell] if 0 <= cell < len(space) else cell
        raise NotATopCell(f"{name} is not a top cell")


def _require_cells(space: FiniteSpace, cells: AtomSet) -> None:
    outside = cells - space.cell_set()
    if outside:
        raise NotATopCell(f"{space.names(outside)} are not top cells")


def _limit_table(space: FiniteSpace, graph: nx.DiGraph) -> Dict[int, AtomSet]:
    """
    Limit set of every cell through the condensation DAG: the cells reachable
    from a cyclic strongly connected component that is reachable from c
    """
    condensed = nx.condensation(graph)
    mapping = condensed.graph["mapping"]
    below: Dict[int, np.ndarray] = {}
    limit: Dict[int, np.ndarray] = {}
    for node in reversed(list(nx.topological_sort(condensed))):
        members = list(condensed.nodes[node]["members"])
        reach = np.zeros(len(space), dtype=bool)
        reach[members] = True
        found = np.zeros(len(space), dtype=bool)
        for succ in condensed.successors(node):
            reach |= below[succ]
            found |= limit[succ]
        if len(members) > 1 or graph.has_edge(members[0], members[0]):
            found |= reach
        below[node] = reach
        limit[node] = found
    return {cell: AtomSet(limit[mapping[cell]]) for cell in space.cells}


def omega_table(space: FiniteSpace, cell_map: CellMap) -> Dict[int, AtomSet]:
    return _limit_table(space, cell_map.graph)


def alpha_table(space: FiniteSpace, cell_map: CellMap) -> Dict[int, AtomSet]:
    return _limit_table(space, cell_map.graph.reverse(copy=False))


def omega_limit(space: FiniteSpace, cell_map: CellMap, cell: int) -> AtomSet:
    """
    omega(c): iterate T <- map(T) from the forward-reachable set of c

    Raises:
        NotATopCell: c is not a top cell
    """
    _require_cell(space, cell)
    current = space.atom_set(nx.descendants(cell_map.graph, cell) | {cell})
    while True:
        following = cell_map.image_of(current)
        if following == current:
            return current
        current = following


def alpha_limit(space: FiniteSpace, cell_map: CellMap, cell: int) -> AtomSet:
    """Backward counterpart of omega_limit, computed from predecessors"""
    _require_cell(space, cell)
    current = space.atom_set(nx.ancestors(cell_map.graph, cell) | {cell})
    while True:
        previous = cell_map.preimage_of(current)
        if previous == current:
            return current
        current = previous


def omega_global(space: FiniteSpace, cell_map: CellMap) -> AtomSet:
    result = space.empty()
    for omega in omega_table(space, cell_map).values():
        result = result | omega
    return result


def classify_cells(space: FiniteSpace, cell_map: CellMap) -> CellClassification:
    graph = cell_map.graph
    critical = space.atom_set(nx.nodes_with_selfloops(graph))
    periodic = space.atom_set(cyclic_nodes(graph))
    table = omega_table(space, cell_map)
    poisson = space.atom_set(c for c, omega in table.items() if c in omega)
    logging.debug(f"Cells: {len(critical)} critical, {len(periodic)} periodic, {len(poisson)} Poisson stable")
    return CellClassification(critical, periodic, poisson)


def invariant_hull(space: FiniteSpace, cell_map: CellMap, cells: AtomSet) -> AtomSet:
    """Cells of A with infinite forward and backward walks inside A"""
    _require_cells(space, cells)
    current = cells
    while True:
        kept = current & cell_map.image_of(current) & cell_map.preimage_of(current)
        if kept == current:
            return current
        current = kept


def _region_flags(space: FiniteSpace, target: AtomSet, weak: AtomSet, strong: AtomSet) -> AttractionReport:
    cells = space.cell_set()
    neighbourhood = target | adjacent_cells(space, target)
    return AttractionReport(
        a_weak=weak,
        a_strong=strong,
        is_weak_attractor=bool(target) and neighbourhood.issubset(weak),
        is_attractor=bool(target) and neighbourhood.issubset(strong),
        is_global_weak=weak == cells,
        is_global=strong == cells,
    )


def _regions(space: FiniteSpace, table: Dict[int, AtomSet], target: AtomSet) -> Tuple[AtomSet, AtomSet]:
    weak = space.atom_set(c for c, limit in table.items() if not limit.isdisjoint(target))
    strong = space.atom_set(c for c, limit in table.items() if limit and limit.issubset(target))
    return weak, strong


def attraction_analysis(space: FiniteSpace, cell_map: CellMap, target: AtomSet) -> AttractionReport:
    """
    Regions of weak and strong attraction of a cell set M

    Attractor flags require M and every cell adjacent to M to lie in the
    region; global flags require the region to be every cell.
    """
    _require_cells(space, target)
    weak, strong = _regions(space, omega_table(space, cell_map), target)
    return _region_flags(space, target, weak, strong)


def repulsion_analysis(space: FiniteSpace, cell_map: CellMap, target: AtomSet) -> AttractionReport:
    """Attraction analysis of M for the backward dynamics, from alpha limits"""
    _require_cells(space, target)
    weak, strong = _regions(space, alpha_table(space, cell_map), target)
    return _region_flags(space, target, weak, strong)


def is_r_exterior(space: FiniteSpace, cell_map: CellMap, subset: AtomSet) -> ExteriorCertificate:
    """
    Absorbing test: U is forward invariant and the cell graph outside U is
    acyclic, so every orbit eventually stays in U. Exit edges are ignored.

    Raises:
        NotOpen: U is not open
    """
    if not space.is_open(subset):
        raise NotOpen(f"{space.names(subset - space.interior(subset))} are not interior to the set")
    names = space.atoms
    inside = subset & space.cell_set()
    for cell in inside:
        for target in sorted(cell_map.image(cell)):
            if target not in subset:
                return ExteriorCertificate(False, escaping_edge=(names[cell], names[target]))

    outside = [c for c in space.cells if c not in subset]
    complement = cell_map.graph.subgraph(outside)
    cycle = find_cycle_nodes(complement)
    if cycle:
        return ExteriorCertificate(False, cycle=[names[c] for c in cycle])

    times: Dict[int, int] = {}
    for cell in reversed(list(nx.topological_sort(complement))):
        times[cell] = 1 + max((times[d] for d in cell_map.image(cell) if d in times), default=0)
    entry = {names[c]: times.get(c, 0) for c in space.cells}
    return ExteriorCertificate(True, entry_times=entry)


def r_exterior_tower(space: FiniteSpace, cell_map: CellMap, max_depth: int = DEFAULT_MAX_DEPTH) -> Tower:
    """
    Canonical absorbing tower: E_k = open_hull(F^k(cells)).

    A fixpoint is recorded by repeating the last level (tail Stabilized). When
    every orbit leaves the window the empty level is dropped and the tail is
    ShrinksToEmpty; hitting max_depth also yields ShrinksToEmpty.
    """
    if max_depth < 1:
        raise ExflowError(f"max_depth must be at least 1, got {max_depth}")
    current = space.cell_set()
    levels = [space.open_hull(current)]
    tail = None
    for _ in range(max_depth):
        following = cell_map.image_of(current)
        if not following:
            tail = Tail.SHRINKS_TO_EMPTY
            break
        levels.append(space.open_hull(following))
        if following == current:
            tail = Tail.STABILIZED
            break
        current = following
    if tail is None:
        logging.warning(f"r-exterior tower did not stabilize within {max_depth} steps; declaring ShrinksToEmpty")
        tail = Tail.SHRINKS_TO_EMPTY
    logging.info(f"r-exterior tower: {len(levels)} levels, tail {tail.value}, last level {len(levels[-1])} atoms")
    return Tower(levels=tuple(levels), tail=tail)


def reverse(space: FiniteSpace, cell_map: CellMap) -> CellMap:
    """Edge transpose; cells without preimage exit"""
    images: Dict[int, set] = {c: set() for c in space.cells}
    for source, target in cell_map.edges():
        images[target].add(source)
    return CellMap(space, images)


def lagrange_stable(cell_map: CellMap) -> bool:
    """Every forward semi-trajectory stays in the window"""
    return not cell_map.exits


def sample_walk(cell_map: CellMap, start: int, steps: int, rng: np.random.Generator) -> OrbitSample:
    """Random maximal walk; Exit counts as one more choice where allowed"""
    _require_cell(cell_map.space, start)
    walk = [start]
    cell = start
    for _ in range(steps):
        options = sorted(cell_map.image(cell))
        choices = len(options) + (1 if cell_map.exits_at(cell) else 0)
        pick = int(rng.integers(choices))
        if pick == len(options):
            return OrbitSample(start, tuple(walk), exited=True)
        cell = options[pick]
        walk.append(cell)
    return OrbitSample(start, tuple(walk))


def forward_walk(cell_map: CellMap, start: int, steps: int) -> OrbitSample:
    """Deterministic walk following the least image cell"""
    _require_cell(cell_map.space, start)
    walk = [start]
    cell = start
    for _ in range(steps):
        options = cell_map.image(cell)
        if not options:
            return OrbitSample(start, tuple(walk), exited=True)
        cell = min(options)
        walk.append(cell)
    return OrbitSample(start, tuple(walk))


def omega0_end(space: FiniteSpace, cell_map: CellMap, tower: Tower, sample: OrbitSample) -> EndPoint:
    """
    End of a trajectory: the branch of components its tail settles in

    Raises:
        InsufficientHorizon: the walk never settles in some level
    """
    tree, ends = end_space(space, tower)
    min_tail = 1 if sample.exited else DEFAULT_MIN_TAIL
    final = sample.walk[-1]
    for k in range(tree.depth):
        block = tree.component_of(k, final)
        if block < 0 or settle_index([tree.component_of(k, x) == block for x in sample.walk], min_tail) is None:
            raise InsufficientHorizon(k, f"walk from {space.atoms[sample.start]} never settles in level {k}")
    return ends[tree.component_of(tree.depth - 1, final)]


def basin_decomposition(space: FiniteSpace, cell_map: CellMap, tower: Tower) -> BasinReport:
    """
    Exact basins: c lies in basin(a) when no maximal walk from c can exit
    outside a's last-level component or cycle forever outside it
    """
    tree, ends = end_space(space, tower)
    last = tree.depth - 1
    graph = cell_map.graph
    cyclic = cyclic_nodes(graph)
    cells = space.cell_set()
    basins = {}
    claimed = space.empty()
    for end in ends:
        target = tree.block(last, end.branch[last])
        escapes = {c for c in cell_map.exits if c not in target} | {c for c in cyclic if c not in target}
        basin = cells - space.atom_set(ancestors_inclusive(graph, escapes))
        basins[end.name] = basin
        claimed = claimed | basin
    ambiguous = cells - claimed
    logging.info(f"Basins: {[len(b) for b in basins.values()]} cells per end, {len(ambiguous)} ambiguous")
    return BasinReport(basins=basins, ambiguous=ambiguous)


__all__ = [
    "EXIT",
    "DEFAULT_MAX_DEPTH",
    "CellMap",
    "OrbitSample",
    "CellClassification",
    "AttractionReport",
    "ExteriorCertificate",
    "BasinReport",
    "omega_limit",
    "omega_table",
    "omega_global",
    "alpha_limit",
    "alpha_table",
    "classify_cells",
    "invariant_hull",
    "attraction_analysis",
    "repulsion_analysis",
    "is_r_exterior",
    "r_exterior_tower",
    "reverse",
    "lagrange_stable",
    "sample_walk",
    "forward_walk",
    "omega0_end",
    "basin_decomposition",
]

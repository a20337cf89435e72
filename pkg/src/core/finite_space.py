"""
Finite T0 spaces stored as minimal-open-neighbourhood tables, with the
open/closed set algebra and component computation used by every other module
"""
import itertools
import logging
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from .errors import DegenerateGrid, EmptySpace, ExflowError, NotASubset

HULL_MODES = ("interior", "closure", "open_hull")

AtomLike = Union[int, str]


class AtomSet:
    """Dense membership record over the atom list of one space"""
    __slots__ = ("mask",)

    def __init__(self, mask: np.ndarray):
        mask = np.asarray(mask, dtype=bool)
        mask.setflags(write=False)
        self.mask = mask

    @classmethod
    def empty(cls, size: int) -> "AtomSet":
        return cls(np.zeros(size, dtype=bool))

    @classmethod
    def full(cls, size: int) -> "AtomSet":
        return cls(np.ones(size, dtype=bool))

    @classmethod
    def from_indices(cls, size: int, indices: Iterable[int]) -> "AtomSet":
        mask = np.zeros(size, dtype=bool)
        idx = list(indices)
        if idx:
            mask[idx] = True
        return cls(mask)

    @property
    def size(self) -> int:
        return len(self.mask)

    def indices(self) -> List[int]:
        return np.flatnonzero(self.mask).tolist()

    def first(self) -> int:
        return int(np.argmax(self.mask)) if self.mask.any() else -1

    def issubset(self, other: "AtomSet") -> bool:
        return not bool(np.any(self.mask & ~other.mask))

    def isdisjoint(self, other: "AtomSet") -> bool:
        return not bool(np.any(self.mask & other.mask))

    def __len__(self) -> int:
        return int(np.count_nonzero(self.mask))

    def __bool__(self) -> bool:
        return bool(self.mask.any())

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices())

    def __contains__(self, index: int) -> bool:
        return 0 <= index < len(self.mask) and bool(self.mask[index])

    def __and__(self, other: "AtomSet") -> "AtomSet":
        return AtomSet(self.mask & other.mask)

    def __or__(self, other: "AtomSet") -> "AtomSet":
        return AtomSet(self.mask | other.mask)

    def __sub__(self, other: "AtomSet") -> "AtomSet":
        return AtomSet(self.mask & ~other.mask)

    def __le__(self, other: "AtomSet") -> bool:
        return self.issubset(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AtomSet):
            return NotImplemented
        return self.mask.shape == other.mask.shape and bool(np.array_equal(self.mask, other.mask))

    def __hash__(self) -> int:
        return hash(self.mask.tobytes())

    def __repr__(self) -> str:
        return f"AtomSet({self.indices()})"


def _csr(rows: Sequence[FrozenSet[int]]) -> Tuple[np.ndarray, np.ndarray]:
    """Flatten a list of index sets into (pointer, index) arrays for reduceat"""
    ptr = np.zeros(len(rows) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(r) for r in rows])
    flat = np.fromiter(itertools.chain.from_iterable(sorted(r) for r in rows),
                       dtype=np.int64, count=int(ptr[-1]))
    return ptr, flat


class FiniteSpace:
    """
    A finite T0 space given by its minimal open neighbourhoods U_x.

    Atoms are identified by position; `atoms` holds their names in the fixed
    construction order. `cells` are the top cells the dynamics lives on; by
    default these are the open points.
    """

    def __init__(self, atoms: Sequence[str], min_open: Sequence[Iterable[int]],
                 dims: Optional[Sequence[Optional[int]]] = None,
                 cells: Optional[Sequence[int]] = None,
                 coords: Optional[Sequence[Tuple[int, ...]]] = None,
                 name: str = ""):
        if not atoms:
            raise EmptySpace("a finite space needs at least one atom")
        self.atoms: Tuple[str, ...] = tuple(atoms)
        self.name = name
        self.index: Dict[str, int] = {a: i for i, a in enumerate(self.atoms)}
        if len(self.index) != len(self.atoms):
            raise ExflowError("atom names must be unique")
        self.min_open: Tuple[FrozenSet[int], ...] = tuple(frozenset(u) for u in min_open)
        self.dims: Tuple[Optional[int], ...] = tuple(dims) if dims is not None else (None,) * len(self.atoms)
        self.coords = tuple(coords) if coords is not None else None
        self._validate()

        closures: List[set] = [set() for _ in self.atoms]
        for x, up in enumerate(self.min_open):
            for y in up:
                closures[y].add(x)
        self.min_closed: Tuple[FrozenSet[int], ...] = tuple(frozenset(c) for c in closures)

        self._up_ptr, self._up_idx = _csr(self.min_open)
        self._down_ptr, self._down_idx = _csr(self.min_closed)
        pairs = [(x, y) for x, up in enumerate(self.min_open) for y in up if y != x]
        self._edges = np.array(pairs, dtype=np.int64).reshape(-1, 2)

        if cells is None:
            cells = [x for x, up in enumerate(self.min_open) if len(up) == 1]
        self.cells: Tuple[int, ...] = tuple(sorted(cells))
        self._cell_set = frozenset(self.cells)

    def _validate(self) -> None:
        n = len(self.atoms)
        if len(self.min_open) != n:
            raise ExflowError("one minimal open set per atom is required")
        seen: Dict[FrozenSet[int], int] = {}
        for x, up in enumerate(self.min_open):
            if x not in up:
                raise ExflowError(f"atom {self.atoms[x]} is missing from its minimal open set")
            for y in up:
                if not 0 <= y < n:
                    raise ExflowError(f"minimal open set of {self.atoms[x]} names an unknown atom")
                if not self.min_open[y] <= up:
                    raise ExflowError(
                        f"incoherent minimal opens: {self.atoms[y]} in U_{self.atoms[x]} "
                        f"but U_{self.atoms[y]} is not contained in it")
            if up in seen:
                raise ExflowError(f"atoms {self.atoms[seen[up]]} and {self.atoms[x]} are not T0-separated")
            seen[up] = x

    def __len__(self) -> int:
        return len(self.atoms)

    def __repr__(self) -> str:
        return f"FiniteSpace({self.name or 'unnamed'}, atoms={len(self.atoms)}, cells={len(self.cells)})"

    # -- conversions --------------------------------------------------------

    def atom(self, ref: AtomLike) -> int:
        if isinstance(ref, str):
            if ref not in self.index:
                raise ExflowError(f"unknown atom {ref!r}")
            return self.index[ref]
        return int(ref)

    def atom_set(self, refs: Iterable[AtomLike] = ()) -> AtomSet:
        return AtomSet.from_indices(len(self.atoms), (self.atom(r) for r in refs))

    def names(self, atoms: Union[AtomSet, Iterable[int]]) -> List[str]:
        return [self.atoms[i] for i in atoms]

    def empty(self) -> AtomSet:
        return AtomSet.empty(len(self.atoms))

    def full(self) -> AtomSet:
        return AtomSet.full(len(self.atoms))

    def is_cell(self, index: int) -> bool:
        return index in self._cell_set

    def cell_set(self) -> AtomSet:
        return AtomSet.from_indices(len(self.atoms), self.cells)

    def minimal_open(self, x: AtomLike) -> AtomSet:
        return AtomSet.from_indices(len(self.atoms), self.min_open[self.atom(x)])

    # -- set algebra ----------------------------------------------------------

    def closure(self, subset: AtomSet) -> AtomSet:
        """closure(S) = {x | U_x meets S}"""
        return AtomSet(np.logical_or.reduceat(subset.mask[self._up_idx], self._up_ptr[:-1]))

    def interior(self, subset: AtomSet) -> AtomSet:
        """interior(S) = {x in S | U_x inside S}"""
        inside = np.logical_and.reduceat(subset.mask[self._up_idx], self._up_ptr[:-1])
        return AtomSet(inside & subset.mask)

    def star(self, subset: AtomSet) -> AtomSet:
        """Smallest open set containing S: the union of U_x over x in S"""
        return AtomSet(np.logical_or.reduceat(subset.mask[self._down_idx], self._down_ptr[:-1]))

    def open_hull(self, subset: AtomSet) -> AtomSet:
        return self.interior(self.closure(subset))

    def is_open(self, subset: AtomSet) -> bool:
        return self.interior(subset) == subset

    def is_closed(self, subset: AtomSet) -> bool:
        return self.closure(subset) == subset

    def comparability_edges(self, subset: AtomSet) -> np.ndarray:
        """Pairs (x, y) with y in U_x, x != y, both inside S"""
        if not len(self._edges):
            return self._edges
        keep = subset.mask[self._edges[:, 0]] & subset.mask[self._edges[:, 1]]
        return self._edges[keep]


def hull(space: FiniteSpace, subset: AtomSet, mode: str) -> AtomSet:
    """
    Closure-type operators on a finite space

    Args:
        space: The owning space
        subset: Atom set S
        mode: 'interior', 'closure' or 'open_hull'

    Returns:
        interior(S), closure(S) or interior(closure(S))
    """
    if mode == "interior":
        return space.interior(subset)
    if mode == "closure":
        return space.closure(subset)
    if mode == "open_hull":
        return space.open_hull(subset)
    raise ExflowError(f"unknown hull mode {mode!r}; expected one of {HULL_MODES}")


def component_labels(space: FiniteSpace, subset: AtomSet) -> Tuple[List[AtomSet], np.ndarray]:
    """
    Connected components of the subspace S under the comparability graph

    Returns:
        (blocks ordered by least atom, per-atom block index with -1 outside S)
    """
    graph = nx.Graph()
    graph.add_nodes_from(subset.indices())
    graph.add_edges_from(map(tuple, space.comparability_edges(subset).tolist()))
    groups = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
    labels = np.full(len(space), -1, dtype=np.int64)
    blocks = []
    for b, members in enumerate(groups):
        labels[members] = b
        blocks.append(AtomSet.from_indices(len(space), members))
    return blocks, labels


def components(space: FiniteSpace, subset: AtomSet) -> List[AtomSet]:
    """Partition of S into components, each block labelled by its least atom"""
    return component_labels(space, subset)[0]


def saturate(space: FiniteSpace, subset: AtomSet, ambient: AtomSet) -> Tuple[bool, AtomSet]:
    """
    Saturation of S inside the open set E

    Args:
        space: The owning space
        subset: S, which must lie inside E
        ambient: The open set E

    Returns:
        (S is a union of components of E, union of the components of E meeting S)
    """
    if not subset.issubset(ambient):
        extra = space.names(subset - ambient)
        raise NotASubset(f"atoms {extra} are outside the ambient set")
    blocks, labels = component_labels(space, ambient)
    hit = np.unique(labels[subset.mask])
    mask = np.isin(labels, hit[hit >= 0])
    saturation = AtomSet(mask & ambient.mask)
    return saturation == subset, saturation


def adjacent_cells(space: FiniteSpace, cells: AtomSet) -> AtomSet:
    """Cells outside T sharing a face with some cell of T"""
    closed = space.closure(cells)
    touching = np.logical_or.reduceat(closed.mask[space._down_idx], space._down_ptr[:-1])
    return AtomSet(touching & space.cell_set().mask & ~cells.mask)


def _grid_face_name(coord: Tuple[int, ...]) -> str:
    if len(coord) == 1:
        q = coord[0]
        return f"c{q // 2}" if q % 2 else f"f{q // 2 - 1}{q // 2}"
    if all(q % 2 for q in coord):
        return "c" + "_".join(str(q // 2) for q in coord)
    return "f" + "_".join(str(q) for q in coord)


def build_grid_space(cell_counts: Sequence[int], active: Iterable[Sequence[int]],
                     name: str = "") -> FiniteSpace:
    """
    Face poset of a cubical grid restricted to the faces of active top cells

    Args:
        cell_counts: Number of top cells along each axis
        active: Grid indices of the active top cells (ints are accepted in 1-D)
        name: Optional label carried by the space

    Returns:
        FiniteSpace whose minimal opens are the open stars of the faces
    """
    counts = tuple(int(c) for c in cell_counts)
    if not counts:
        raise DegenerateGrid("a grid needs at least one axis")
    if any(c < 1 for c in counts):
        raise DegenerateGrid(f"cell counts must be positive, got {counts}")
    dim = len(counts)
    tops = set()
    for cell in active:
        cell = (int(cell),) if np.isscalar(cell) else tuple(int(i) for i in cell)
        if len(cell) != dim or any(not 0 <= i < n for i, n in zip(cell, counts)):
            raise DegenerateGrid(f"active cell {cell} is outside the grid {counts}")
        tops.add(tuple(2 * i + 1 for i in cell))
    if not tops:
        raise EmptySpace("no active top cells")

    faces = set()
    for top in tops:
        for offset in itertools.product((-1, 0, 1), repeat=dim):
            faces.add(tuple(q + o for q, o in zip(top, offset)))
    if dim == 1:
        # a 1-D grid models an open interval: only shared vertices are faces
        faces = {f for f in faces if f[0] % 2 or ((f[0] - 1,) in tops and (f[0] + 1,) in tops)}

    def face_dim(coord: Tuple[int, ...]) -> int:
        return sum(q % 2 for q in coord)

    ordered = sorted(faces, key=lambda f: (-face_dim(f), f))
    position = {f: i for i, f in enumerate(ordered)}
    min_open = []
    for face in ordered:
        choices = [(q,) if q % 2 else (q - 1, q, q + 1) for q in face]
        star = {position[c] for c in itertools.product(*choices) if c in position}
        min_open.append(star)
    space = FiniteSpace(
        atoms=[_grid_face_name(f) for f in ordered],
        min_open=min_open,
        dims=[face_dim(f) for f in ordered],
        cells=[position[t] for t in ordered if t in tops],
        coords=ordered,
        name=name,
    )
    logging.debug(f"Built grid space {counts}: {len(space)} atoms, {len(space.cells)} top cells")
    return space


def from_poset(atoms: Sequence[str], up_sets: Dict[str, Iterable[str]], name: str = "") -> FiniteSpace:
    """Finite space from named atoms and their minimal open sets (given by name)"""
    index = {a: i for i, a in enumerate(atoms)}
    min_open = []
    for a in atoms:
        up = {index[a]} | {index[b] for b in up_sets.get(a, ())}
        min_open.append(up)
    return FiniteSpace(atoms, min_open, name=name)


def random_poset(n: int, density: float = 0.3, seed: int = 0) -> FiniteSpace:
    """
    Random finite T0 space: transitive closure of a seeded random DAG

    Args:
        n: Number of atoms
        density: Probability of an edge i -> j for i < j
        seed: Seed of the numpy generator

    Returns:
        FiniteSpace with U_x = {x} plus everything above x
    """
    rng = np.random.default_rng(seed)
    dag = nx.DiGraph()
    dag.add_nodes_from(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                dag.add_edge(i, j)
    closure = nx.transitive_closure_dag(dag)
    min_open = [{i} | set(closure.successors(i)) for i in range(n)]
    return FiniteSpace([f"p{i}" for i in range(n)], min_open, name=f"poset{n}-{seed}")

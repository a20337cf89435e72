"""
Towers of exterior open sets: limit and bar-limit sets, the component tree,
end spaces, the canonical map from limit atoms to ends and net classification
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ExflowError, InvalidTower
from .finite_space import AtomSet, FiniteSpace, component_labels

DEFAULT_MIN_TAIL = 2


class Tail(Enum):
    """Declared behaviour of the chain beyond its stored levels"""
    STABILIZED = "Stabilized"
    SHRINKS_TO_EMPTY = "ShrinksToEmpty"
    SHRINKS_TO_CORE = "ShrinksToCore"


@dataclass(frozen=True)
class Tower:
    """Decreasing chain E_0 >= E_1 >= ... of open sets with a tail declaration"""
    levels: Tuple[AtomSet, ...]
    tail: Tail = Tail.STABILIZED
    core: Optional[AtomSet] = None

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))

    def __len__(self) -> int:
        return len(self.levels)

    @property
    def last(self) -> AtomSet:
        return self.levels[-1]


@dataclass(frozen=True)
class ComponentTree:
    """Component partitions per level with bonding (parent) maps"""
    blocks: Tuple[Tuple[AtomSet, ...], ...]
    labels: Tuple[np.ndarray, ...]
    parents: Tuple[Tuple[int, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.blocks)

    def component_of(self, level: int, atom: int) -> int:
        """Block index of atom at a level, -1 when the atom is outside E_level"""
        return int(self.labels[level][atom])

    def block(self, level: int, index: int) -> AtomSet:
        return self.blocks[level][index]

    def ancestor(self, level: int, index: int, target: int) -> int:
        """Image of a level component under the composite bonding map down to target"""
        while level > target:
            index = self.parents[level][index]
            level -= 1
        return index

    def bonding_image_sizes(self) -> List[int]:
        """Per level k < N-1: how many level-k components are hit by level k+1"""
        return [len(set(self.parents[k + 1])) for k in range(self.depth - 1)]


@dataclass(frozen=True, eq=False)
class EndPoint:
    """
    Coherent thread of components, one per level.

    Two ends are equal when they agree at the last level, which determines
    the whole branch.
    """
    branch: Tuple[int, ...]
    label: str

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EndPoint):
            return NotImplemented
        return self.branch[-1:] == other.branch[-1:]

    def __hash__(self) -> int:
        return hash(self.branch[-1:])

    @property
    def name(self) -> str:
        return f"end:{self.label}"


@dataclass
class E0Analysis:
    e0: Dict[int, int]
    injective: bool
    injective_witness: Optional[Tuple[int, int]]
    surjective: bool
    surjective_witness: Optional[int]
    e0_components: Dict[int, AtomSet] = field(default_factory=dict)

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


@dataclass
class NetClassification:
    eps_net: bool
    pi0_net: bool
    branch: Optional[EndPoint]
    entry_indices: List[Dict[str, Optional[int]]]


def validate_tower(space: FiniteSpace, tower: Tower) -> List[str]:
    """
    Check the tower invariants

    Args:
        space: Ambient space
        tower: Candidate tower

    Returns:
        One diagnostic per violation, empty when the tower is valid
    """
    diagnostics = []
    if not tower.levels:
        return ["tower has no levels"]
    for k, level in enumerate(tower.levels):
        if level.size != len(space):
            diagnostics.append(f"level {k} is not a subset of the space")
            continue
        if not space.is_open(level):
            diagnostics.append(f"level {k} not open")
        if k > 0 and tower.levels[k - 1].size == level.size and not level.issubset(tower.levels[k - 1]):
            diagnostics.append(f"level {k} not contained in level {k - 1}")
    n = len(tower.levels)
    if tower.tail is Tail.STABILIZED and n > 1 and tower.levels[-1] != tower.levels[-2]:
        diagnostics.append(f"level {n - 1} differs from level {n - 2} under a stabilized tail")
    if tower.tail is Tail.SHRINKS_TO_CORE:
        if tower.core is None or not tower.core:
            diagnostics.append("shrinking-to-core tail without a core")
        elif not tower.core.issubset(tower.last):
            diagnostics.append(f"core not contained in level {n - 1}")
    elif tower.core is not None:
        diagnostics.append(f"core declared for a {tower.tail.value} tail")
    return diagnostics


def _require_valid(space: FiniteSpace, tower: Tower) -> None:
    diagnostics = validate_tower(space, tower)
    if diagnostics:
        raise InvalidTower(diagnostics)


def limit_sets(space: FiniteSpace, tower: Tower) -> Tuple[AtomSet, AtomSet]:
    """
    Limit set L and bar-limit set of a tower

    Returns:
        (L, Lbar): Stabilized gives L = last level and Lbar the intersection of
        closures; ShrinksToEmpty gives (empty, empty); ShrinksToCore gives
        (core, closure(core))
    """
    _require_valid(space, tower)
    if tower.tail is Tail.SHRINKS_TO_EMPTY:
        return space.empty(), space.empty()
    if tower.tail is Tail.SHRINKS_TO_CORE:
        return tower.core, space.closure(tower.core)
    bar = space.full()
    for level in tower.levels:
        bar = bar & space.closure(level)
    return tower.last, bar


@lru_cache(maxsize=64)
def component_tree(space: FiniteSpace, tower: Tower) -> ComponentTree:
    """Component partitions of every level; cached per (space, tower)"""
    _require_valid(space, tower)
    blocks, labels, parents = [], [], []
    for k, level in enumerate(tower.levels):
        level_blocks, level_labels = component_labels(space, level)
        blocks.append(tuple(level_blocks))
        labels.append(level_labels)
        if k == 0:
            parents.append(tuple(-1 for _ in level_blocks))
        else:
            parents.append(tuple(int(labels[k - 1][b.first()]) for b in level_blocks))
    return ComponentTree(tuple(blocks), tuple(labels), tuple(parents))


def _branch(tree: ComponentTree, last_index: int) -> Tuple[int, ...]:
    top = tree.depth - 1
    return tuple(tree.ancestor(top, last_index, k) for k in range(tree.depth))


def end_space(space: FiniteSpace, tower: Tower) -> Tuple[ComponentTree, List[EndPoint]]:
    """
    Ends of a tower: one coherent branch per component of the last level

    Returns:
        (component tree, ends ordered by the least atom of their last component)
    """
    tree = component_tree(space, tower)
    last = tree.depth - 1
    ends = [
        EndPoint(branch=_branch(tree, b), label=space.atoms[block.first()])
        for b, block in enumerate(tree.blocks[last])
    ]
    logging.debug(f"End space: {len(ends)} ends over {tree.depth} levels")
    return tree, ends


def e0_analysis(space: FiniteSpace, tower: Tower) -> E0Analysis:
    """
    The canonical map e0 from limit atoms to ends

    Injectivity holds when each limit atom is alone among limit atoms in the
    intersection of its branch; surjectivity when every end's branch meets L.
    """
    limit, _ = limit_sets(space, tower)
    tree, ends = end_space(space, tower)
    last = tree.depth - 1
    e0 = {x: tree.component_of(last, x) for x in limit}

    injective_witness = None
    fibers: Dict[int, List[int]] = {}
    for x, end_index in e0.items():
        fibers.setdefault(end_index, []).append(x)
    for end_index in sorted(fibers):
        members = fibers[end_index]
        if len(members) > 1:
            injective_witness = (members[0], members[1])
            break

    surjective_witness = next((i for i in range(len(ends)) if i not in fibers), None)
    e0_components = {
        i: AtomSet.from_indices(len(space), fibers.get(i, [])) for i in range(len(ends))
    }
    return E0Analysis(
        e0=e0,
        injective=injective_witness is None,
        injective_witness=injective_witness,
        surjective=surjective_witness is None,
        surjective_witness=surjective_witness,
        e0_components=e0_components,
    )


def settle_index(inside: Sequence[bool], min_tail: int) -> Optional[int]:
    """Start of the maximal all-true suffix, or None if shorter than min_tail"""
    start = len(inside)
    while start > 0 and inside[start - 1]:
        start -= 1
    if len(inside) - start < min(min_tail, len(inside)) or start == len(inside):
        return None
    return start


def classify_net(space: FiniteSpace, tower: Tower, seq: Sequence[int],
                 min_tail: int = DEFAULT_MIN_TAIL) -> NetClassification:
    """
    Classify a finite atom sequence as an exterior net

    Args:
        space: Ambient space
        tower: Valid tower
        seq: Nonempty sequence of atom indices
        min_tail: Shortest suffix accepted as "eventually"

    Returns:
        NetClassification with per-level entry indices for both notions
    """
    if not seq:
        raise ExflowError("classify_net needs a nonempty sequence")
    tree, ends = end_space(space, tower)
    final = seq[-1]
    entries = []
    eps_net = pi0_net = True
    for k, level in enumerate(tower.levels):
        eps_entry = settle_index([x in level for x in seq], min_tail)
        block = tree.component_of(k, final)
        pi0_entry = None
        if block >= 0:
            pi0_entry = settle_index([tree.component_of(k, x) == block for x in seq], min_tail)
        entries.append({"eps": eps_entry, "pi0": pi0_entry})
        eps_net = eps_net and eps_entry is not None
        pi0_net = pi0_net and pi0_entry is not None

    branch = None
    if pi0_net:
        branch = ends[tree.component_of(tree.depth - 1, final)]
    return NetClassification(eps_net=eps_net, pi0_net=pi0_net, branch=branch, entry_indices=entries)


def trivial_tower(space: FiniteSpace) -> Tower:
    """The externology {X}"""
    return Tower(levels=(space.full(),), tail=Tail.STABILIZED)


def total_tower(space: FiniteSpace) -> Tower:
    """The externology of all open sets; its chain base reaches the empty set"""
    return Tower(levels=(space.full(), space.empty(), space.empty()), tail=Tail.STABILIZED)


def neighborhood_tower(space: FiniteSpace, subset: AtomSet) -> Tower:
    """Open neighbourhoods of D, generated by the smallest one star(D)"""
    around = space.star(subset)
    return Tower(levels=(space.full(), around, around), tail=Tail.STABILIZED)

"""
C0-completions: the carrier X glued along L to the end space, its G0
topology, the W0 neighbourhood basis and the induced tower, plus the
completeness, separation and compactness checkers
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .errors import NotSaturated
from .externology import (
    E0Analysis,
    EndPoint,
    Tail,
    Tower,
    e0_analysis,
    end_space,
    limit_sets,
)
from .finite_space import AtomSet, FiniteSpace, components, saturate
from ..utils.graph_tools import spaces_isomorphic


@dataclass(frozen=True)
class CarrierPoint:
    """Interior(atom) for atoms outside L, Glued(end) for every end"""
    name: str
    atom: Optional[int] = None
    end: Optional[int] = None

    @property
    def is_glued(self) -> bool:
        return self.end is not None


@dataclass
class G0Check:
    is_open: bool
    witness: Optional[str] = None


@dataclass
class C0Verdict:
    complete: bool
    reason: Optional[str] = None
    witness: Dict[str, Any] = field(default_factory=dict)
    branch_criterion: bool = True
    theorem: str = "c0_completeness"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": self.theorem,
            "complete": self.complete,
            "reason": self.reason,
            "witness": self.witness,
            "lpc_completeness": {"theorem": "lpc_completeness", "branch_criterion": self.branch_criterion},
        }


@dataclass
class SeparationReport:
    ends_separated: bool
    split_levels: Dict[Tuple[str, str], int]
    escape: Dict[str, bool]
    hausdorff_ok: bool
    completeex_applicable: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": "hausdorff_conditions",
            "ends_separated": self.ends_separated,
            "split_levels": [{"ends": list(k), "level": v} for k, v in self.split_levels.items()],
            "escape": self.escape,
            "hausdorff_ok": self.hausdorff_ok,
            "closed_totally_disconnected": {
                "theorem": "closed_totally_disconnected",
                "applicable": self.completeex_applicable,
            },
        }


@dataclass
class CompactnessReport:
    bonding_images_finite: List[int]
    end_cover_ok: bool
    connected: bool
    escape_all: bool
    cocompact_levels: bool
    compact_conclusion: bool
    ends: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": "compactness_conditions",
            "bonding_images_finite": self.bonding_images_finite,
            "end_cover_ok": self.end_cover_ok,
            "freudenthal_preconditions": {
                "theorem": "freudenthal_ends",
                "connected": self.connected,
                "escape_all": self.escape_all,
                "cocompact_levels": self.cocompact_levels,
            },
            "compact_conclusion": self.compact_conclusion,
            "ends": self.ends,
        }


class Completion:
    """
    The C0-completion of a space with respect to a tower.

    Carrier subsets are AtomSets over `points`, which are also the atoms of
    `as_space()`.
    """

    def __init__(self, space: FiniteSpace, tower: Tower):
        self.space = space
        self.tower = tower
        self.limit, self.bar_limit = limit_sets(space, tower)
        self.tree, self.ends = end_space(space, tower)
        self.e0: E0Analysis = e0_analysis(space, tower)

        points: List[CarrierPoint] = []
        p0 = np.full(len(space), -1, dtype=np.int64)
        for x in range(len(space)):
            if x not in self.limit:
                p0[x] = len(points)
                points.append(CarrierPoint(name=space.atoms[x], atom=x))
        incl0 = []
        for i, end in enumerate(self.ends):
            incl0.append(len(points))
            points.append(CarrierPoint(name=end.name, end=i))
        for x, end_index in self.e0.e0.items():
            p0[x] = incl0[end_index]
        self.points: Tuple[CarrierPoint, ...] = tuple(points)
        self.p0 = p0
        self.incl0: Tuple[int, ...] = tuple(incl0)
        # basis generators: one single component per level
        self.basis: Tuple[Tuple[int, int], ...] = tuple(
            (k, b) for k in range(self.tree.depth) for b in range(len(self.tree.blocks[k]))
        )

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"Completion(points={len(self.points)}, ends={len(self.ends)})"

    # -- carrier subsets ------------------------------------------------------

    def carrier_set(self, indices=()) -> AtomSet:
        return AtomSet.from_indices(len(self.points), indices)

    def names(self, subset: AtomSet) -> List[str]:
        return [self.points[i].name for i in subset]

    def p0_image(self, atoms: AtomSet) -> AtomSet:
        mask = np.zeros(len(self.points), dtype=bool)
        mask[self.p0[atoms.mask]] = True
        return AtomSet(mask)

    def p0_preimage(self, subset: AtomSet) -> AtomSet:
        return AtomSet(subset.mask[self.p0])

    def incl0_preimage(self, subset: AtomSet) -> List[int]:
        return [i for i, point in enumerate(self.incl0) if point in subset]

    def end_component(self, end_index: int, level: int) -> AtomSet:
        return self.tree.block(level, self.ends[end_index].branch[level])

    # -- G0 topology ----------------------------------------------------------

    def w0(self, subset: AtomSet, level: int) -> AtomSet:
        """
        W0(V) = p0(V) together with the ends whose level component lies in V

        Raises:
            NotSaturated: V is not a union of components of E_level
        """
        ambient = self.tower.levels[level]
        if not subset.issubset(ambient):
            raise NotSaturated(f"{self.space.names(subset - ambient)} lie outside level {level}")
        saturated, _ = saturate(self.space, subset, ambient)
        if not saturated:
            raise NotSaturated(f"{self.space.names(subset)} is not saturated in level {level}")
        result = self.p0_image(subset).mask.copy()
        for i, end in enumerate(self.ends):
            if self.tree.block(level, end.branch[level]).first() in subset:
                result[self.incl0[i]] = True
        return AtomSet(result)

    def is_g0_open(self, subset: AtomSet) -> G0Check:
        """
        G0-openness: the atom preimage is open and every end in W carries a
        saturated component of some level inside p0^-1(W). The last level
        gives the weakest requirement, since its components are the smallest.
        """
        preimage = self.p0_preimage(subset)
        interior = self.space.interior(preimage)
        if interior != preimage:
            return G0Check(False, self.space.atoms[(preimage - interior).first()])
        last = self.tree.depth - 1
        for i, point in enumerate(self.incl0):
            if point in subset and not self.end_component(i, last).issubset(preimage):
                return G0Check(False, self.points[point].name)
        return G0Check(True)

    def minimal_open(self, point: int) -> AtomSet:
        """Least G0-open set containing a carrier point"""
        last = self.tree.depth - 1
        current = self.carrier_set([point])
        while True:
            grown = current | self.p0_image(self.space.star(self.p0_preimage(current)))
            for i, end_point in enumerate(self.incl0):
                if end_point in grown:
                    grown = grown | self.p0_image(self.end_component(i, last))
            if grown == current:
                return current
            current = grown

    @cached_property
    def induced_tower(self) -> Tower:
        levels = tuple(self.w0(level, k) for k, level in enumerate(self.tower.levels))
        if self.tower.tail is Tail.STABILIZED or (self.tower.tail is Tail.SHRINKS_TO_EMPTY and not self.ends):
            return Tower(levels=levels, tail=self.tower.tail)
        return Tower(levels=levels, tail=Tail.SHRINKS_TO_CORE, core=self.carrier_set(self.incl0))

    def as_space(self) -> FiniteSpace:
        """The completed object as a finite space, cells = p0(cells) plus ends"""
        return self.carrier_space

    @cached_property
    def carrier_space(self) -> FiniteSpace:
        dims = [
            self.space.dims[p.atom] if p.atom is not None else None
            for p in self.points
        ]
        cells = sorted({int(self.p0[c]) for c in self.space.cells} | set(self.incl0))
        return FiniteSpace(
            atoms=[p.name for p in self.points],
            min_open=[self.minimal_open(i).indices() for i in range(len(self.points))],
            dims=dims,
            cells=cells,
            name=f"{self.space.name}+" if self.space.name else "",
        )


def build_completion(space: FiniteSpace, tower: Tower) -> Completion:
    completion = Completion(space, tower)
    logging.info(
        f"Completion of {space.name or 'space'}: {len(space)} atoms -> "
        f"{len(completion)} points, {len(completion.ends)} ends"
    )
    return completion


def w0(completion: Completion, subset: AtomSet, level: int) -> AtomSet:
    return completion.w0(subset, level)


def is_g0_open(completion: Completion, subset: AtomSet) -> G0Check:
    return completion.is_g0_open(subset)


def carrier_isomorphic(first: FiniteSpace, second: FiniteSpace) -> bool:
    return spaces_isomorphic(first, second)


def check_c0_complete(space: FiniteSpace, tower: Tower) -> C0Verdict:
    """
    Decide C0-completeness: e0 bijective and every limit atom has arbitrarily
    small saturated neighbourhoods, i.e. its last-level component lies in U_x
    """
    limit, _ = limit_sets(space, tower)
    tree, ends = end_space(space, tower)
    analysis = e0_analysis(space, tower)
    last = tree.depth - 1

    branch_ok = True
    for end in ends:
        block = tree.block(last, end.branch[last])
        if tower.tail is Tail.STABILIZED:
            branch_ok = branch_ok and block.issubset(limit)
        else:
            branch_ok = branch_ok and not block.isdisjoint(limit)

    if not analysis.injective:
        x, y = analysis.injective_witness
        verdict = C0Verdict(False, "E0NotInjective", {"atoms": [space.atoms[x], space.atoms[y]]}, branch_ok)
    elif not analysis.surjective:
        verdict = C0Verdict(False, "E0NotSurjective", {"end": ends[analysis.surjective_witness].name}, branch_ok)
    else:
        verdict = C0Verdict(True, branch_criterion=branch_ok)
        for x in limit:
            block = tree.block(last, tree.component_of(last, x))
            neighbourhood = space.minimal_open(x)
            if not block.issubset(neighbourhood):
                verdict = C0Verdict(
                    False,
                    "SaturatedNbhd",
                    {"atom": space.atoms[x], "neighbourhood": space.names(neighbourhood)},
                    branch_ok,
                )
                break
    logging.info(f"C0-completeness: {'Complete' if verdict.complete else 'Fails(' + verdict.reason + ')'}")
    return verdict


def _escape_table(space: FiniteSpace, tower: Tower, limit: AtomSet) -> Dict[str, bool]:
    escape = {}
    for x in range(len(space)):
        if x in limit:
            continue
        if tower.tail is Tail.SHRINKS_TO_EMPTY:
            escape[space.atoms[x]] = True
            continue
        # a shrinking tail eventually leaves every closed set missing its core
        target = tower.core if tower.tail is Tail.SHRINKS_TO_CORE else tower.last
        escape[space.atoms[x]] = space.closure(space.minimal_open(x)).isdisjoint(target)
    return escape


def check_separation(space: FiniteSpace, tower: Tower) -> SeparationReport:
    """
    Hausdorff-type hypotheses for the completion: ends split by disjoint W0
    sets, and every non-limit atom has a closed neighbourhood whose
    complement contains a level
    """
    completion = build_completion(space, tower)
    tree, ends = completion.tree, completion.ends
    split_levels = {}
    disjoint = []
    for i, first in enumerate(ends):
        for second in ends[i + 1:]:
            level = next(k for k in range(tree.depth) if first.branch[k] != second.branch[k])
            split_levels[(first.name, second.name)] = level
            first_w0 = completion.w0(tree.block(level, first.branch[level]), level)
            second_w0 = completion.w0(tree.block(level, second.branch[level]), level)
            disjoint.append(first_w0.isdisjoint(second_w0))
    ends_separated = all(disjoint)

    escape = _escape_table(space, tower, completion.limit)
    hausdorff_ok = ends_separated and all(escape.values())

    # neighbourhood tower of a closed limit set with singleton components
    limit = completion.limit
    closure_cells = space.closure(limit) & space.cell_set()
    completeex = (
        tower.tail is Tail.STABILIZED
        and all(level == space.star(limit) for level in tower.levels[1:])
        and all(len(block) == 1 for block in components(space, limit))
        and closure_cells.issubset(limit)
    )
    return SeparationReport(ends_separated, split_levels, escape, hausdorff_ok, completeex)


def check_compactness(space: FiniteSpace, tower: Tower) -> CompactnessReport:
    """
    Compactness hypotheses at the finite scale. The end-cover and
    cocompactness clauses hold automatically on finite models and are
    reported for traceability.
    """
    limit, _ = limit_sets(space, tower)
    tree, ends = end_space(space, tower)
    connected = len(components(space, space.full())) == 1
    escape_all = all(_escape_table(space, tower, limit).values())
    bonding = tree.bonding_image_sizes()
    report = CompactnessReport(
        bonding_images_finite=bonding,
        end_cover_ok=True,
        connected=connected,
        escape_all=escape_all,
        cocompact_levels=True,
        compact_conclusion=connected and escape_all,
        ends=len(ends),
    )
    logging.debug(f"Compactness hypotheses: connected={connected}, escape_all={escape_all}, bonding={bonding}")
    return report


def check_idempotence(space: FiniteSpace, tower: Tower) -> Dict[str, Any]:
    """Completing a completion changes nothing up to carrier isomorphism"""
    first = build_completion(space, tower)
    second = build_completion(first.as_space(), first.induced_tower)
    verdict = check_c0_complete(first.as_space(), first.induced_tower)
    return {
        "theorem": "first_countable_idempotence",
        "carrier_isomorphic": carrier_isomorphic(first.as_space(), second.as_space()),
        "completed_is_complete": verdict.complete,
        "reason": verdict.reason,
    }


__all__ = [
    "CarrierPoint",
    "Completion",
    "C0Verdict",
    "G0Check",
    "SeparationReport",
    "CompactnessReport",
    "build_completion",
    "w0",
    "is_g0_open",
    "carrier_isomorphic",
    "check_c0_complete",
    "check_separation",
    "check_compactness",
    "check_idempotence",
    "EndPoint",
]

"""
Completions of cell flows (right and left), the induced dynamics on the
carrier, trajectory convergence and the limit-set theorem checkers
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx

from ..core.completion import C0Verdict, Completion, build_completion, carrier_isomorphic, check_c0_complete
from ..core.errors import ExflowError
from ..core.externology import DEFAULT_MIN_TAIL, EndPoint, Tail, Tower, classify_net, end_space, limit_sets, settle_index
from ..core.finite_space import AtomSet, FiniteSpace, components
from .semiflow import (
    DEFAULT_MAX_DEPTH,
    AttractionReport,
    CellMap,
    OrbitSample,
    alpha_table,
    attraction_analysis,
    classify_cells,
    omega0_end,
    omega_global,
    omega_table,
    r_exterior_tower,
    reverse,
)

DIRECTIONS = ("r", "l")


@dataclass
class ConvergenceReport:
    is_pi0_net: bool
    end: EndPoint
    converges: bool
    witness_levels: List[Optional[int]]


@dataclass
class FlowCompletionReport:
    space: FiniteSpace = field(repr=False)
    tower: Tower = field(repr=False)
    verdict: C0Verdict
    critical: AtomSet
    periodic: AtomSet
    poisson: AtomSet
    omega: AtomSet
    omega_closure: AtomSet
    limit: AtomSet
    bar_limit: AtomSet
    equalities: Dict[str, bool]
    stone: bool
    stone_note: Optional[str]
    chain_ok: bool
    attraction: AttractionReport
    lagrange_stable: bool
    minimal_global_attractor: bool
    biconditional_ok: bool
    ends: int
    failure_reasons: List[str] = field(default_factory=list)
    moving_ends: List[str] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.verdict.complete

    def to_dict(self) -> Dict[str, Any]:
        names = self.space.names
        return {
            "theorem": "stone_limit",
            "complete": self.verdict.complete,
            "verdict": self.verdict.to_dict(),
            "C": names(self.critical),
            "P": names(self.periodic),
            "Poisson": names(self.poisson),
            "Omega": names(self.omega),
            "closure_Omega": names(self.omega_closure),
            "L": names(self.limit),
            "Lbar": names(self.bar_limit),
            "equalities": self.equalities,
            "stone": self.stone,
            "stone_note": self.stone_note,
            "chain_ok": self.chain_ok,
            "attractor": {
                "theorem": "global_weak_attractor",
                "is_weak_attractor": self.attraction.is_weak_attractor,
                "is_attractor": self.attraction.is_attractor,
                "is_global_weak": self.attraction.is_global_weak,
                "is_global": self.attraction.is_global,
            },
            "lagrange_stable": self.lagrange_stable,
            "minimal_global_attractor": self.minimal_global_attractor,
            "biconditional_ok": self.biconditional_ok,
            "ends": self.ends,
            "failure_reasons": self.failure_reasons,
            "moving_ends": self.moving_ends,
        }


def _directed_map(space: FiniteSpace, cell_map: CellMap, direction: str) -> CellMap:
    if direction not in DIRECTIONS:
        raise ExflowError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    return cell_map if direction == "r" else reverse(space, cell_map)


def induced_map(completion: Completion, cell_map: CellMap) -> CellMap:
    """
    Dynamics on the carrier: p0(c) goes to p0(map(c)) and Exit stays Exit.
    A glued point collects the images of its whole fiber, so an end moves
    when its limit cells do. An end whose fiber has no images stays fixed.
    """
    images: Dict[int, set] = {}
    exits = set()
    for cell in completion.space.cells:
        point = int(completion.p0[cell])
        images.setdefault(point, set()).update(int(completion.p0[d]) for d in cell_map.image(cell))
        if cell_map.exits_at(cell):
            exits.add(point)
    for point in completion.incl0:
        if not images.get(point):
            images[point] = {point}
    return CellMap(completion.as_space(), images, exits)


def moving_ends(completion: Completion, induced: CellMap) -> List[str]:
    """Names of the ends the induced dynamics does not fix"""
    return [
        completion.points[point].name
        for point in completion.incl0
        if induced.image(point) != frozenset({point})
    ]


def complete_flow(space: FiniteSpace, cell_map: CellMap, direction: str = "r",
                  max_depth: int = DEFAULT_MAX_DEPTH) -> Tuple[Completion, CellMap]:
    """
    Complete a cell flow along its absorbing tower

    Args:
        space: Ambient space
        cell_map: Forward dynamics
        direction: 'r' for the map itself, 'l' for its reversal
        max_depth: Truncation of the absorbing tower

    Returns:
        (completion, induced map on the completed space)
    """
    source = _directed_map(space, cell_map, direction)
    tower = r_exterior_tower(space, source, max_depth)
    completion = build_completion(space, tower)
    return completion, induced_map(completion, source)


def orbit_convergence(space: FiniteSpace, cell_map: CellMap, tower: Tower,
                      sample: OrbitSample, completion: Optional[Completion] = None) -> ConvergenceReport:
    """
    Net and convergence verdicts for one walk.

    The walk converges to its end when, at every level, the end lies in
    W0 of its branch component and p0 of the walk eventually stays there.

    Raises:
        InsufficientHorizon: the walk never settles in some level
    """
    end = omega0_end(space, cell_map, tower, sample)
    min_tail = 1 if sample.exited else DEFAULT_MIN_TAIL
    net = classify_net(space, tower, sample.walk, min_tail=min_tail)
    if completion is None:
        completion = build_completion(space, tower)
    end_point = completion.incl0[completion.ends.index(end)]
    witness = []
    for k in range(completion.tree.depth):
        neighbourhood = completion.w0(completion.tree.block(k, end.branch[k]), k)
        if end_point not in neighbourhood:
            witness.append(None)
            continue
        witness.append(settle_index([int(completion.p0[x]) in neighbourhood for x in sample.walk], min_tail))
    return ConvergenceReport(
        is_pi0_net=net.pi0_net,
        end=end,
        converges=all(w is not None for w in witness),
        witness_levels=witness,
    )


def _stabilized_bijective(tower: Tower, space: FiniteSpace) -> bool:
    if tower.tail is not Tail.STABILIZED:
        return False
    tree, _ = end_space(space, tower)
    if tree.depth == 1:
        return True
    top = tree.depth - 1
    return len(tree.blocks[top]) == len(tree.blocks[top - 1]) == len(set(tree.parents[top]))


def check_thm66(space: FiniteSpace, cell_map: CellMap, max_depth: int = DEFAULT_MAX_DEPTH) -> FlowCompletionReport:
    """
    Stone-limit checker: completeness of the absorbing tower against the
    recurrence sets. Complete must coincide with C = cl(Omega) plus the
    Stone surrogate; a mismatch is logged and reported.
    """
    tower = r_exterior_tower(space, cell_map, max_depth)
    verdict = check_c0_complete(space, tower)
    limit, bar_limit = limit_sets(space, tower)
    _, ends = end_space(space, tower)
    classes = classify_cells(space, cell_map)
    omega = omega_global(space, cell_map)
    omega_closure = space.closure(omega)
    cells = space.cell_set()

    critical, periodic, poisson = classes.critical, classes.periodic, classes.poisson
    equalities = {
        "L=C": (limit & cells) == critical,
        "C=P": critical == periodic,
        "C=cl(Omega)": critical == (omega_closure & cells),
        "Lbar=cl(Omega)": bar_limit == omega_closure,
    }
    chain_ok = (
        critical.issubset(periodic)
        and periodic.issubset(poisson)
        and poisson.issubset(omega)
        and omega.issubset(omega_closure)
    )

    limit_blocks = components(space, limit)
    multi_cell = any(len(block) > 1 for block in limit_blocks)
    stone = (
        len(ends) == len(limit_blocks)
        and _stabilized_bijective(tower, space)
        and not multi_cell
    )
    stone_note = "stone: false (multi-cell component)" if multi_cell else None

    attraction = attraction_analysis(space, cell_map, limit & cells)
    minimal_global = attraction_analysis(space, cell_map, omega_closure & cells).is_global

    reasons = []
    if not verdict.complete:
        reasons.append(verdict.reason)
    if not equalities["C=cl(Omega)"]:
        reasons.append("C != cl(Omega)")
    if not stone:
        reasons.append("stone surrogate fails")

    completion = build_completion(space, tower)
    moved = moving_ends(completion, induced_map(completion, cell_map))
    if moved:
        logging.warning(f"Induced dynamics moves ends {moved} on {space.name or 'space'}")

    biconditional_ok = verdict.complete == (equalities["C=cl(Omega)"] and stone)
    if not biconditional_ok:
        logging.warning(
            f"Completeness {verdict.complete} disagrees with C=cl(Omega) "
            f"{equalities['C=cl(Omega)']} and stone {stone} on {space.name or 'space'}"
        )
    logging.info(
        f"Stone-limit check on {space.name or 'space'}: "
        f"{'Complete' if verdict.complete else 'Fails'}, |C|={len(critical)}, |Omega|={len(omega)}, stone={stone}"
    )
    return FlowCompletionReport(
        space=space,
        tower=tower,
        verdict=verdict,
        critical=critical,
        periodic=periodic,
        poisson=poisson,
        omega=omega,
        omega_closure=omega_closure,
        limit=limit,
        bar_limit=bar_limit,
        equalities=equalities,
        stone=stone,
        stone_note=stone_note,
        chain_ok=chain_ok,
        attraction=attraction,
        lagrange_stable=not cell_map.exits,
        minimal_global_attractor=minimal_global,
        biconditional_ok=biconditional_ok,
        ends=len(ends),
        failure_reasons=reasons,
        moving_ends=moved,
    )


def duality_check(space: FiniteSpace, cell_map: CellMap, max_depth: int = DEFAULT_MAX_DEPTH) -> Dict[str, Any]:
    """
    Left/right duality: the left completion equals the right completion of
    the reversed map, reversal is an involution on edges, and reversed omega
    limits are the alpha limits. Reports the attractor role of every right
    limit component in both directions.
    """
    right, _ = complete_flow(space, cell_map, "r", max_depth)
    left, _ = complete_flow(space, cell_map, "l", max_depth)
    reversed_map = reverse(space, cell_map)
    mirror, _ = complete_flow(space, reversed_map, "r", max_depth)

    involution = reverse(space, reversed_map).edges() == cell_map.edges()
    reversed_omega = omega_table(space, reversed_map)
    alphas = alpha_table(space, cell_map)
    alpha_matches = all(reversed_omega[c] == alphas[c] for c in space.cells)

    cells = space.cell_set()
    backward = reversed_map.graph
    roles = []
    for block in components(space, right.limit):
        target = block & cells
        forward = attraction_analysis(space, cell_map, target)
        backwards = attraction_analysis(space, reversed_map, target)
        reached = set(target)
        for cell in target:
            reached |= nx.descendants(backward, cell)
        roles.append({
            "component": space.names(block),
            "forward": {"attractor": forward.is_attractor, "weak_attractor": forward.is_weak_attractor},
            "reversed": {"attractor": backwards.is_attractor, "weak_attractor": backwards.is_weak_attractor},
            "swapped": forward.is_attractor != backwards.is_attractor,
            "reversed_source": reached >= set(space.cells),
        })

    isomorphic = carrier_isomorphic(left.as_space(), mirror.as_space())
    logging.info(f"Duality on {space.name or 'space'}: carriers isomorphic={isomorphic}, involution={involution}")
    return {
        "theorem": "reversed_flow_duality",
        "carrier_isomorphic": isomorphic,
        "reverse_involution": involution,
        "alpha_matches_reversed_omega": alpha_matches,
        "right_limit": space.names(right.limit),
        "left_limit": space.names(left.limit),
        "right_ends": [e.name for e in right.ends],
        "left_ends": [e.name for e in left.ends],
        "roles": roles,
    }

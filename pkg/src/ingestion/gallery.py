"""
Deterministic fixture gallery: small hand-built spaces and maps plus the
ODE grids used by the checkers and the batch runner
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..core.errors import ConfigError, UnknownFixture
from ..core.externology import Tail, Tower
from ..core.finite_space import FiniteSpace, build_grid_space
from ..dynamics.semiflow import DEFAULT_MAX_DEPTH, CellMap, r_exterior_tower
from .cell_mapper import GridSpec, build_cell_map
from .vector_field import ApproxParams, VectorFieldSpec

MAX_BINTREE_DEPTH = 10


@dataclass
class Fixture:
    name: str
    space: FiniteSpace
    cell_map: Optional[CellMap] = None
    tower: Optional[Tower] = None
    params: Dict[str, Any] = field(default_factory=dict)
    field_spec: Optional[VectorFieldSpec] = None
    grid: Optional[GridSpec] = None
    approx: Optional[ApproxParams] = None

    @property
    def has_dynamics(self) -> bool:
        return self.cell_map is not None

    def describe(self) -> Dict[str, Any]:
        info: Dict[str, Any] = {"name": self.name, "params": dict(self.params)}
        if self.grid is not None:
            info["grid"] = {
                "lower": list(self.grid.lower),
                "upper": list(self.grid.upper),
                "resolution": list(self.grid.resolution),
            }
        if self.approx is not None:
            info["approx"] = {"tau": self.approx.tau, "substeps": self.approx.substeps, "bloat": self.approx.bloat}
        return info


def _line(count: int, name: str) -> FiniteSpace:
    return build_grid_space((count,), range(count), name=name)


def _shift_map(space: FiniteSpace, last: str) -> CellMap:
    table = {f"c{i}": [f"c{i + 1}"] for i in range(4)}
    table["c4"] = [last]
    return CellMap.from_names(space, table)


def ray5(_: Optional[int] = None) -> Fixture:
    """Open ray with the tower of its tails; the limit set is empty"""
    space = _line(5, "ray5")
    levels = tuple(space.open_hull(space.atom_set(f"c{j}" for j in range(k, 5))) for k in range(5))
    return Fixture("ray5", space, tower=Tower(levels, Tail.SHRINKS_TO_EMPTY))


def ray5shift(_: Optional[int] = None) -> Fixture:
    space = _line(5, "ray5shift")
    return Fixture("ray5shift", space, cell_map=_shift_map(space, "Exit"))


def line5shift(_: Optional[int] = None) -> Fixture:
    space = _line(5, "line5shift")
    return Fixture("line5shift", space, cell_map=_shift_map(space, "c4"))


def twosinks(_: Optional[int] = None) -> Fixture:
    space = _line(5, "twosinks")
    table = {"c0": ["c0"], "c1": ["c0"], "c2": ["c1", "c3"], "c3": ["c4"], "c4": ["c4"]}
    return Fixture("twosinks", space, cell_map=CellMap.from_names(space, table))


def cycle3(_: Optional[int] = None) -> Fixture:
    space = _line(3, "cycle3")
    table = {"c0": ["c1"], "c1": ["c2"], "c2": ["c0"]}
    return Fixture("cycle3", space, cell_map=CellMap.from_names(space, table))


def bintree(depth: Optional[int] = None) -> Fixture:
    """
    Binary tree of the given depth drawn as a graph with a stem; leaf edges
    run off to infinity, so every root-to-leaf path is an end
    """
    depth = 2 if depth is None else int(depth)
    if not 1 <= depth <= MAX_BINTREE_DEPTH:
        raise ConfigError("n", f"bintree depth must lie in 1..{MAX_BINTREE_DEPTH}, got {depth}")
    paths = [""]
    for length in range(1, depth + 1):
        paths += [p + bit for p in paths if len(p) == length - 1 for bit in "01"]
    edges = ["e" + p for p in paths]
    vertices = ["s"] + ["v" + p for p in paths if len(p) < depth]
    atoms = edges + vertices
    index = {a: i for i, a in enumerate(atoms)}
    min_open = [{i} for i in range(len(edges))]
    min_open.append({index["s"], index["e"]})
    for p in paths:
        if len(p) < depth:
            min_open.append({index["v" + p], index["e" + p], index["e" + p + "0"], index["e" + p + "1"]})
    space = FiniteSpace(atoms, min_open, dims=[1] * len(edges) + [0] * len(vertices), name=f"bintree{depth}")
    levels = tuple(
        space.open_hull(space.atom_set("e" + p for p in paths if len(p) >= k)) for k in range(depth + 1)
    )
    return Fixture("bintree", space, tower=Tower(levels, Tail.SHRINKS_TO_EMPTY), params={"n": depth})


def morse_circle(n: Optional[int] = None) -> Fixture:
    """
    Circle of n cells under gradient descent of a height with its maximum
    in cell M (cell 0) and its minimum in cell m (cell n/2)
    """
    n = 8 if n is None else int(n)
    if n < 4 or n % 2:
        raise ConfigError("n", f"morse-circle needs an even n >= 4, got {n}")
    half = n // 2
    cells = ["M" if i == 0 else "m" if i == half else f"c{i}" for i in range(n)]
    vertices = [f"f{i}{(i + 1) % n}" for i in range(n)]
    min_open = [{i} for i in range(n)] + [{n + i, i, (i + 1) % n} for i in range(n)]
    space = FiniteSpace(cells + vertices, min_open, dims=[1] * n + [0] * n, name=f"morse-circle{n}")
    images = {}
    for i in range(n):
        if i in (0, half):
            images[i] = [i]
        elif i < half:
            images[i] = [i + 1]
        else:
            images[i] = [i - 1]
    return Fixture("morse-circle", space, cell_map=CellMap(space, images), params={"n": n})


def _ode_fixture(name: str, field_spec: VectorFieldSpec, tau: float, res: Optional[int]) -> Fixture:
    res = 32 if res is None else int(res)
    grid = GridSpec(lower=(-2.0, -2.0), upper=(2.0, 2.0), resolution=(res, res))
    approx = ApproxParams(tau=tau)
    space, cell_map = build_cell_map(field_spec, grid, approx, name=f"{name}{res}")
    return Fixture(name, space, cell_map=cell_map, params={"n": res},
                   field_spec=field_spec, grid=grid, approx=approx)


def limit_cycle_grid(res: Optional[int] = None) -> Fixture:
    return _ode_fixture("limit-cycle-grid", VectorFieldSpec.radial_cycle(), 0.5, res)


def double_well(res: Optional[int] = None) -> Fixture:
    height = VectorFieldSpec.gradient_descent("x^4 - 2*x^2 + y^2 + 1")
    return _ode_fixture("double-well", height, 0.25, res)


FIXTURES: Dict[str, Callable[[Optional[int]], Fixture]] = {
    "ray5": ray5,
    "ray5shift": ray5shift,
    "line5shift": line5shift,
    "twosinks": twosinks,
    "cycle3": cycle3,
    "bintree": bintree,
    "morse-circle": morse_circle,
    "limit-cycle-grid": limit_cycle_grid,
    "double-well": double_well,
}


def list_fixtures() -> List[str]:
    return list(FIXTURES)


def gallery(name: str, n: Optional[int] = None, max_depth: int = DEFAULT_MAX_DEPTH) -> Fixture:
    """
    Build a fixture by name

    Args:
        name: One of list_fixtures()
        n: Size parameter (bintree depth, morse-circle cells, grid resolution)
        max_depth: Truncation for the absorbing tower of map fixtures

    Returns:
        Fixture with space, optional map and tower (map fixtures get their
        r-exterior tower)
    """
    if name not in FIXTURES:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    fixture = FIXTURES[name](n)
    if fixture.cell_map is not None and fixture.tower is None:
        fixture.tower = r_exterior_tower(fixture.space, fixture.cell_map, max_depth)
    logging.info(f"Fixture {name}: {len(fixture.space)} atoms, {len(fixture.space.cells)} cells")
    return fixture


def fixture_sizes() -> Dict[str, Tuple[Optional[int], ...]]:
    """Parameter values exercised by the batch runner"""
    return {
        "ray5": (None,),
        "ray5shift": (None,),
        "line5shift": (None,),
        "twosinks": (None,),
        "cycle3": (None,),
        "bintree": (2, 3),
        "morse-circle": (8, 16),
        "limit-cycle-grid": (32,),
        "double-well": (32,),
    }

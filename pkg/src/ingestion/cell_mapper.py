"""
Outer approximation of a time-tau map on the top cells of a cubical grid
"""
import itertools
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..core.errors import DegenerateGrid
from ..core.finite_space import FiniteSpace, build_grid_space
from ..dynamics.semiflow import CellMap
from .vector_field import ApproxParams, VectorFieldSpec, time_tau_map

SNAP_TOLERANCE = 1e-9
# times the cell diagonal; below half a cell width the centre rule adds no cell
DEFAULT_BLOAT_FACTOR = 0.1


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned box split into resolution[i] cells along axis i"""
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    resolution: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(float(v) for v in self.lower))
        object.__setattr__(self, "upper", tuple(float(v) for v in self.upper))
        object.__setattr__(self, "resolution", tuple(int(v) for v in self.resolution))
        if not (len(self.lower) == len(self.upper) == len(self.resolution)) or not self.lower:
            raise DegenerateGrid("lower, upper and resolution need the same positive length")
        if any(r < 2 for r in self.resolution):
            raise DegenerateGrid(f"resolution must be at least 2 per axis, got {self.resolution}")
        if any(not hi > lo for lo, hi in zip(self.lower, self.upper)):
            raise DegenerateGrid(f"empty box {self.lower} .. {self.upper}")

    @property
    def dim(self) -> int:
        return len(self.resolution)

    @property
    def cell_width(self) -> np.ndarray:
        return (np.array(self.upper) - np.array(self.lower)) / np.array(self.resolution)

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.cell_width))

    def cell_indices(self) -> List[Tuple[int, ...]]:
        return list(itertools.product(*(range(r) for r in self.resolution)))


def _sample_offsets(dim: int) -> np.ndarray:
    """Corners then centre, in cell-width units"""
    corners = list(itertools.product((0.0, 1.0), repeat=dim))
    return np.array(corners + [(0.5,) * dim])


def _snap(u: np.ndarray) -> np.ndarray:
    nearest = np.round(u)
    return np.where(np.abs(u - nearest) < SNAP_TOLERANCE, nearest, u)


def _interior_range(lo: float, hi: float, count: int) -> Tuple[int, int]:
    """Cells whose open interior meets [lo, hi] (grid units); a degenerate
    interval on a grid line touches both neighbours"""
    first, last = int(np.floor(lo)), int(np.ceil(hi)) - 1
    if last < first:
        first, last = first - 1, first
    return max(first, 0), min(last, count - 1)


def _hit_cells(lo: np.ndarray, hi: np.ndarray, grid: GridSpec, bloat: float) -> List[Tuple[int, ...]]:
    counts = grid.resolution
    width = grid.cell_width
    ranges = [_interior_range(lo[a], hi[a], counts[a]) for a in range(grid.dim)]
    hits = set(itertools.product(*(range(a, b + 1) for a, b in ranges)))
    if bloat > 0:
        reach = bloat / width
        candidate_ranges = [
            range(max(int(np.floor(lo[a] - reach[a] - 0.5)), 0), min(int(np.ceil(hi[a] + reach[a] - 0.5)), counts[a] - 1) + 1)
            for a in range(grid.dim)
        ]
        for cell in itertools.product(*candidate_ranges):
            centre = np.array(cell) + 0.5
            gap = np.maximum(np.maximum(lo - centre, centre - hi), 0.0) * width
            if np.linalg.norm(gap) <= bloat + 1e-12:
                hits.add(cell)
    return sorted(hits)


def build_cell_map(field_spec: VectorFieldSpec, grid: GridSpec, params: ApproxParams,
                   name: str = "") -> Tuple[FiniteSpace, CellMap]:
    """
    Outer approximation of the time-tau map on grid cells

    Args:
        field_spec: Vector field
        grid: Box and resolution
        params: tau, substeps, bloat (default one tenth of the cell diagonal)
        name: Label carried by the space

    Returns:
        (grid space, cell map); a cell maps to every cell whose interior meets
        the box hull of its integrated samples or whose centre lies within
        bloat of it; samples leaving the box make the cell exit
    """
    if field_spec.dim != grid.dim:
        raise DegenerateGrid(f"field dimension {field_spec.dim} does not match grid dimension {grid.dim}")
    indices = grid.cell_indices()
    space = build_grid_space(grid.resolution, indices, name=name)
    tops = space.cells
    bloat = params.bloat if params.bloat is not None else DEFAULT_BLOAT_FACTOR * grid.diagonal

    lower = np.array(grid.lower)
    upper = np.array(grid.upper)
    width = grid.cell_width
    offsets = _sample_offsets(grid.dim)
    base = np.array(indices, dtype=float)
    samples = (base[:, None, :] + offsets[None, :, :]) * width + lower
    flat = samples.reshape(-1, grid.dim)
    images = time_tau_map(field_spec, params, flat).reshape(samples.shape)

    tolerance = SNAP_TOLERANCE * width
    inside = np.all((images >= lower - tolerance) & (images <= upper + tolerance), axis=2)
    units = _snap((images - lower) / width)

    table = {}
    exits = set()
    for row, cell in enumerate(tops):
        keep = inside[row]
        if not keep.all():
            exits.add(cell)
        if not keep.any():
            table[cell] = []
            continue
        points = units[row][keep]
        hits = _hit_cells(points.min(axis=0), points.max(axis=0), grid, bloat)
        table[cell] = [tops[int(np.ravel_multi_index(h, grid.resolution))] for h in hits]
    cell_map = CellMap(space, table, exits)
    logging.info(
        f"Cell map {name or 'grid'}: {len(tops)} cells, {len(cell_map.edges())} edges, "
        f"{len(exits)} exiting cells, bloat={bloat:.4g}"
    )
    return space, cell_map

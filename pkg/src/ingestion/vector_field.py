"""
Polynomial and closed-form planar vector fields and their fixed-step RK4
time-tau maps
"""
import re
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from ..core.errors import ConfigError, NonFinite

FAMILIES = ("linear", "gradient_descent", "radial_cycle", "custom")
MAX_DEGREE = 6
VARIABLES = "xyz"

_TERM = re.compile(
    r"\s*([+-])?\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*((?:\*?\s*[xyz](?:\s*\^\s*\d+)?\s*)*)"
)
_FACTOR = re.compile(r"([xyz])(?:\s*\^\s*(\d+))?")


def parse_polynomial(text: str, dim: int, key: str = "polynomial") -> np.ndarray:
    """
    Parse a sum of terms coef*x^a*y^b*z^c into a coefficient array

    Args:
        text: Polynomial text, e.g. "x^4 - 2*x^2 + y^2 + 1"
        dim: Number of variables (1 to 3)
        key: Config key reported on errors

    Returns:
        Array of shape (MAX_DEGREE + 1,) * dim; entry [a, b, c] is the
        coefficient of x^a y^b z^c
    """
    coeffs = np.zeros((MAX_DEGREE + 1,) * dim)
    source = text.strip()
    if not source:
        raise ConfigError(key, "empty polynomial")
    pos = 0
    while pos < len(source):
        match = _TERM.match(source, pos)
        if not match or match.end() == pos:
            raise ConfigError(key, f"cannot parse polynomial near {source[pos:]!r}")
        sign, number, factors = match.groups()
        if number is None and not factors.strip():
            raise ConfigError(key, f"dangling sign near {source[pos:]!r}")
        if pos > 0 and sign is None:
            raise ConfigError(key, f"missing operator near {source[pos:]!r}")
        value = float(number) if number else 1.0
        if sign == "-":
            value = -value
        powers = [0] * dim
        for var, power in _FACTOR.findall(factors):
            axis = VARIABLES.index(var)
            if axis >= dim:
                raise ConfigError(key, f"variable {var} used in a {dim}-dimensional field")
            powers[axis] += int(power) if power else 1
        if sum(powers) > MAX_DEGREE:
            raise ConfigError(key, f"degree {sum(powers)} exceeds {MAX_DEGREE}")
        coeffs[tuple(powers)] += value
        pos = match.end()
    return coeffs


def _evaluate(coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Evaluate a coefficient array at points of shape (n, dim)"""
    dim = coeffs.ndim
    if dim == 1:
        return P.polyval(points[:, 0], coeffs)
    if dim == 2:
        return P.polyval2d(points[:, 0], points[:, 1], coeffs)
    return P.polyval3d(points[:, 0], points[:, 1], points[:, 2], coeffs)


@dataclass(frozen=True)
class VectorFieldSpec:
    """
    A vector field from one of the supported families.

    linear uses `matrix`; gradient_descent uses `height` (the field is minus
    its gradient); custom uses one polynomial per axis in `components`;
    radial_cycle is r' = r(1 - r), theta' = 1 in the plane.
    """
    family: str
    dim: int = 2
    matrix: Optional[Tuple[Tuple[float, ...], ...]] = None
    height: Optional[np.ndarray] = field(default=None, compare=False)
    components: Optional[Tuple[np.ndarray, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError("field.family", f"unknown family {self.family!r}")
        if not 1 <= self.dim <= 3:
            raise ConfigError("grid.lower", f"dimension {self.dim} not supported")
        if self.family == "linear":
            matrix = np.asarray(self.matrix, dtype=float)
            if matrix.shape != (self.dim, self.dim):
                raise ConfigError("field.matrix", f"expected a {self.dim}x{self.dim} matrix")
            if not np.all(np.isfinite(matrix)):
                raise ConfigError("field.matrix", "entries must be finite")
        elif self.family == "gradient_descent" and self.height is None:
            raise ConfigError("field.height", "gradient_descent needs a height polynomial")
        elif self.family == "custom" and (self.components is None or len(self.components) != self.dim):
            raise ConfigError("field.components", f"custom fields need {self.dim} components")
        elif self.family == "radial_cycle" and self.dim != 2:
            raise ConfigError("field.family", "radial_cycle is planar")

    @classmethod
    def linear(cls, matrix: Sequence[Sequence[float]]) -> "VectorFieldSpec":
        rows = tuple(tuple(float(v) for v in row) for row in matrix)
        return cls(family="linear", dim=len(rows), matrix=rows)

    @classmethod
    def gradient_descent(cls, height: str, dim: int = 2) -> "VectorFieldSpec":
        return cls(family="gradient_descent", dim=dim, height=parse_polynomial(height, dim, "field.height"))

    @classmethod
    def custom(cls, components: Sequence[str]) -> "VectorFieldSpec":
        dim = len(components)
        parsed = tuple(parse_polynomial(c, dim, "field.components") for c in components)
        return cls(family="custom", dim=dim, components=parsed)

    @classmethod
    def radial_cycle(cls) -> "VectorFieldSpec":
        return cls(family="radial_cycle", dim=2)

    @classmethod
    def zero(cls, dim: int = 2) -> "VectorFieldSpec":
        return cls.linear(np.zeros((dim, dim)))

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Field values at points of shape (n, dim)"""
        if self.family == "linear":
            return points @ np.asarray(self.matrix).T
        if self.family == "radial_cycle":
            x, y = points[:, 0], points[:, 1]
            shrink = 1.0 - np.hypot(x, y)
            return np.stack([x * shrink - y, y * shrink + x], axis=1)
        if self.family == "gradient_descent":
            return -np.stack(
                [_evaluate(P.polyder(self.height, axis=a), points) for a in range(self.dim)], axis=1
            )
        return np.stack([_evaluate(c, points) for c in self.components], axis=1)


@dataclass(frozen=True)
class ApproxParams:
    """Time step, integrator substeps, bloat radius and sampling scheme"""
    tau: float
    substeps: int = 20
    bloat: Optional[float] = None
    samples: str = "corners_center"

    def __post_init__(self):
        if not self.tau > 0 or not np.isfinite(self.tau):
            raise ConfigError("approx.tau", f"tau must be positive, got {self.tau}")
        if self.substeps < 1:
            raise ConfigError("approx.substeps", f"substeps must be at least 1, got {self.substeps}")
        if self.bloat is not None and not self.bloat >= 0:
            raise ConfigError("approx.bloat", f"bloat must be nonnegative, got {self.bloat}")
        if self.samples != "corners_center":
            raise ConfigError("approx.samples", f"unknown sampling scheme {self.samples!r}")


def time_tau_map(field_spec: VectorFieldSpec, params: ApproxParams, points: np.ndarray) -> np.ndarray:
    """
    Integrate the field for time tau with fixed-step RK4

    Args:
        field_spec: Vector field
        params: tau and substeps
        points: Array of shape (n, dim), or a single point of shape (dim,)

    Returns:
        Image points with the input's shape

    Raises:
        NonFinite: overflow or NaN during integration
    """
    state = np.array(points, dtype=float)
    single = state.ndim == 1
    if single:
        state = state[None, :]
    h = params.tau / params.substeps
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(params.substeps):
            k1 = field_spec(state)
            k2 = field_spec(state + 0.5 * h * k1)
            k3 = field_spec(state + 0.5 * h * k2)
            k4 = field_spec(state + h * k3)
            state = state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    if not np.all(np.isfinite(state)):
        raise NonFinite(f"integration over tau={params.tau} produced non-finite values")
    return state[0] if single else state


def describe(field_spec: VectorFieldSpec) -> Dict[str, object]:
    """JSON-friendly description used in reports"""
    info: Dict[str, object] = {"family": field_spec.family, "dim": field_spec.dim}
    if field_spec.matrix is not None:
        info["matrix"] = [list(row) for row in field_spec.matrix]
    return info

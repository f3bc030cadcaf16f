"""Problem instances: a box-shaped domain, three field functions and a curve.

A :class:`Problem` bundles the sampled domain (up to three axes), the
field expressions phi/psi/omega, the parameter curve, and the numeric
tolerances.  Field sampling on the problem's own grid is cached because
the duality routines evaluate the same fields for hundreds of parameter
values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .expr import Expression, evaluate
from .family import Interval, ParamCurve

__all__ = ["GridDomain", "Tolerances", "Problem", "field_values", "section_values",
           "values_at", "section_at"]

MAX_GRID_POINTS = 10**8


@dataclass(frozen=True)
class Tolerances:
    """Numeric thresholds used across the pipeline; override per problem."""

    psi_zero: float = 1e-9        # |psi(x)| at or below this takes the psi-zero branch
    equality_rel: float = 1e-4    # relative gap below which the two sides count as equal
    residual_rel: float = 1e-4    # relative residual certifying an equilibrium point
    estimate_slack_rel: float = 1e-7  # slack for the unconditional one-sided estimate
    exhaustion_stop: float = 1e-9     # improvement threshold ending interval exhaustion


@dataclass(frozen=True)
class GridDomain:
    """A rectangular sampling of the domain (1 to 3 axes).

    ``refine_rounds`` controls local refinement in the scan routines: each
    round re-scans a one-cell neighborhood of the incumbent at full
    per-axis resolution.
    """

    lo: tuple[float, ...]
    hi: tuple[float, ...]
    resolution: tuple[int, ...]
    refine_rounds: int = 0

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lo))
        hi = tuple(float(v) for v in np.atleast_1d(self.hi))
        res = tuple(int(v) for v in np.atleast_1d(self.resolution))
        if len(res) == 1 and len(lo) > 1:
            res = res * len(lo)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "resolution", res)
        if not (len(lo) == len(hi) == len(res)):
            raise ValueError("lo, hi and resolution must have matching lengths")
        if not 1 <= len(lo) <= 3:
            raise ValueError("grid dimension must be 1, 2 or 3")
        for a, b in zip(lo, hi):
            if not (math.isfinite(a) and math.isfinite(b) and a < b):
                raise ValueError(f"invalid axis bounds [{a}, {b}]")
        for r in res:
            if r < 2:
                raise ValueError("resolution must be at least 2 points per axis")
        if self.refine_rounds < 0:
            raise ValueError("refine_rounds must be non-negative")
        total = 1
        for r in res:
            total *= r
        if total > MAX_GRID_POINTS:
            raise ValueError(f"grid has {total} points, above the {MAX_GRID_POINTS} guard")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.resolution

    @property
    def total_points(self) -> int:
        return int(np.prod(self.resolution))

    def axes(self) -> tuple[np.ndarray, ...]:
        return tuple(
            np.linspace(a, b, r) for a, b, r in zip(self.lo, self.hi, self.resolution)
        )

    def spacing(self) -> tuple[float, ...]:
        return tuple((b - a) / (r - 1) for a, b, r in zip(self.lo, self.hi, self.resolution))

    def point(self, flat_index: int) -> tuple[float, ...]:
        idx = np.unravel_index(flat_index, self.shape)
        axes = self.axes()
        return tuple(float(axes[k][i]) for k, i in enumerate(idx))

    def refined_around(self, point: tuple[float, ...], spacing: tuple[float, ...]) -> "GridDomain":
        """One-cell neighborhood of ``point`` (half a cell each way), clipped."""
        lo, hi = [], []
        for k in range(self.dim):
            half = spacing[k] / 2.0
            a = max(self.lo[k], point[k] - half)
            b = min(self.hi[k], point[k] + half)
            if not a < b:  # collapsed axis; keep a sliver around the point
                a, b = max(self.lo[k], point[k] - 1e-300), min(self.hi[k], point[k] + 1e-300)
                if not a < b:
                    a, b = self.lo[k], self.hi[k]
            lo.append(a)
            hi.append(b)
        return GridDomain(tuple(lo), tuple(hi), self.resolution, 0)


@dataclass(frozen=True)
class Problem:
    """A full instance: named axes, fields phi/psi/omega, curve, grid, tolerances."""

    variables: tuple[str, ...]
    phi: Expression
    psi: Expression
    omega: Expression
    curve: ParamCurve
    grid: GridDomain
    tolerances: Tolerances = Tolerances()
    window: float = 1.0  # initial half-width for exhausting an unbounded curve interval

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(self.variables) != self.grid.dim:
            raise ValueError("one variable name is required per grid axis")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be unique")
        if "lambda" in self.variables:
            raise ValueError("'lambda' is reserved for the curve parameter")
        declared = set(self.variables)
        for name, e in (("phi", self.phi), ("psi", self.psi), ("omega", self.omega)):
            extra = e.variables() - declared
            if extra:
                raise ValueError(f"{name} references undeclared variable(s) {sorted(extra)}")
        if self.window <= 0:
            raise ValueError("window must be positive")

    def bindings(self, grid: GridDomain) -> dict[str, np.ndarray]:
        mesh = np.meshgrid(*grid.axes(), indexing="ij")
        return dict(zip(self.variables, mesh))

    @property
    def interval(self) -> Interval:
        return self.curve.domain


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(())
    arr.flags.writeable = False
    return arr


def _sample_fields(prob: Problem, grid: GridDomain):
    b = prob.bindings(grid)
    shape = grid.shape
    out = []
    for e in (prob.phi, prob.psi, prob.omega):
        v = evaluate(e, b)
        out.append(_freeze(np.broadcast_to(np.asarray(v, dtype=float), shape).copy()))
    return tuple(out)


@lru_cache(maxsize=8)
def _cached_fields(prob: Problem, grid: GridDomain):
    return _sample_fields(prob, grid)


def field_values(prob: Problem, grid: GridDomain | None = None):
    """Sampled (phi, psi, omega) arrays on ``grid`` (problem grid cached)."""
    grid = grid if grid is not None else prob.grid
    if grid == prob.grid:
        return _cached_fields(prob, grid)
    return _sample_fields(prob, grid)


def section_values(prob: Problem, grid: GridDomain, lam: float) -> np.ndarray:
    """The family member alpha(lam)*phi + beta(lam)*psi + omega sampled on the grid."""
    phi, psi, omega = field_values(prob, grid)
    a = prob.curve.alpha_at(lam)
    b = prob.curve.beta_at(lam)
    return a * phi + b * psi + omega


def values_at(prob: Problem, point) -> tuple[float, float, float]:
    b = dict(zip(prob.variables, (float(v) for v in np.atleast_1d(point))))
    return (
        float(evaluate(prob.phi, b)),
        float(evaluate(prob.psi, b)),
        float(evaluate(prob.omega, b)),
    )


def section_at(prob: Problem, point, lam: float) -> float:
    phi_v, psi_v, om = values_at(prob, point)
    return float(prob.curve.alpha_at(lam)) * phi_v + float(prob.curve.beta_at(lam)) * psi_v + om

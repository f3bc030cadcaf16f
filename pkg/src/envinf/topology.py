"""Grid-level sublevel-set analysis.

Connectivity of sublevel sets drives two diagnostics: the per-parameter
connectedness check used by the hypothesis report, and the local-minima
counting that certifies the multiplicity alternative (a compact
disconnected sublevel set forces at least two local minima).

Components use edge adjacency (2 neighbors in 1-D, 4 in 2-D); corner
adjacency would merge diagonally-touching wells and weaken the minima
count.  Compactness on a truncated grid is approximated by "no marked
cell on the boundary layer".
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .duality import EquilibriumResult
    from .envelope import HSelector
    from .problem import GridDomain, Problem

__all__ = [
    "SublevelAnalysis",
    "LocalMinimaReport",
    "AlternativeReport",
    "sublevel_components",
    "inf_connected_check",
    "local_minima",
    "alternative_check",
    "write_labels_csv",
]


class UnionFind:
    """Array-backed union-find with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while x != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1


@dataclass
class SublevelAnalysis:
    """Connected components of one sublevel set marked on the grid."""

    threshold: float
    component_count: int
    is_connected: bool
    compact_flag: bool  # no marked cell touches the grid boundary
    strict: bool
    labels: np.ndarray = field(repr=False, default=None)  # -1 outside the sublevel set


@dataclass
class LocalMinimaReport:
    """Grid points whose value is <= every edge-neighbor value.

    Plateaus (adjacent candidates with equal values) collapse to one
    representative, the smallest flat index of the component.
    """

    minima: tuple[tuple[tuple[float, ...], float], ...]
    count: int


def _component_labels(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """Label edge-connected components of a 1-D/2-D boolean mask.

    Labels are assigned 0..k-1 in first-appearance (row-major) order.
    """
    labels = np.full(mask.shape, -1, dtype=int)
    if not mask.any():
        return labels, 0
    if mask.ndim == 1:
        starts = np.flatnonzero(mask & ~np.concatenate([[False], mask[:-1]]))
        comp = np.cumsum(mask & ~np.concatenate([[False], mask[:-1]])) - 1
        labels[mask] = comp[mask]
        return labels, len(starts)
    flat = mask.ravel()
    ids = np.flatnonzero(flat)
    pos = {int(i): k for k, i in enumerate(ids)}
    uf = UnionFind(len(ids))
    ncols = mask.shape[1]
    right = mask[:, :-1] & mask[:, 1:]
    for r, c in zip(*np.nonzero(right)):
        i = r * ncols + c
        uf.union(pos[i], pos[i + 1])
    down = mask[:-1, :] & mask[1:, :]
    for r, c in zip(*np.nonzero(down)):
        i = r * ncols + c
        uf.union(pos[i], pos[i + ncols])
    relabel: dict[int, int] = {}
    out = labels.ravel()
    for k, i in enumerate(ids):
        root = uf.find(k)
        if root not in relabel:
            relabel[root] = len(relabel)
        out[i] = relabel[root]
    return labels, len(relabel)


def _boundary_mask(shape: tuple[int, ...]) -> np.ndarray:
    border = np.zeros(shape, dtype=bool)
    for axis in range(len(shape)):
        sl = [slice(None)] * len(shape)
        sl[axis] = 0
        border[tuple(sl)] = True
        sl[axis] = shape[axis] - 1
        border[tuple(sl)] = True
    return border


def sublevel_components(values: np.ndarray, r: float, strict: bool = True) -> SublevelAnalysis:
    """Components of {f < r} (or {f <= r} when ``strict`` is False)."""
    values = np.asarray(values, dtype=float)
    if values.ndim not in (1, 2):
        raise ValueError("sublevel analysis supports 1- or 2-dimensional grids only")
    mask = values < r if strict else values <= r
    labels, count = _component_labels(mask)
    compact = not bool((mask & _boundary_mask(values.shape)).any())
    return SublevelAnalysis(
        threshold=float(r),
        component_count=count,
        is_connected=count <= 1,
        compact_flag=compact,
        strict=strict,
        labels=labels,
    )


def inf_connected_check(values: np.ndarray, thresholds: int = 16) -> bool:
    """Sweep quantile levels of the sampled values; every strict sublevel
    set must be connected."""
    if thresholds < 8:
        raise ValueError("thresholds must be at least 8")
    values = np.asarray(values, dtype=float)
    levels = np.unique(np.quantile(values.ravel(), np.linspace(0.0, 1.0, thresholds)))
    return all(sublevel_components(values, float(r), strict=True).is_connected for r in levels)


def local_minima(values: np.ndarray, grid: "GridDomain") -> LocalMinimaReport:
    """All grid points not above any edge-neighbor, plateaus collapsed."""
    values = np.asarray(values, dtype=float)
    if values.ndim not in (1, 2):
        raise ValueError("local minima detection supports 1- or 2-dimensional grids only")
    cand = np.ones(values.shape, dtype=bool)
    for axis in range(values.ndim):
        lead = [slice(None)] * values.ndim
        trail = [slice(None)] * values.ndim
        lead[axis] = slice(1, None)
        trail[axis] = slice(None, -1)
        lead_t, trail_t = tuple(lead), tuple(trail)
        cand[lead_t] &= values[lead_t] <= values[trail_t]
        cand[trail_t] &= values[trail_t] <= values[lead_t]
    # collapse plateaus: union adjacent candidates with equal values
    flat_vals = values.ravel()
    flat_cand = cand.ravel()
    ids = np.flatnonzero(flat_cand)
    pos = {int(i): k for k, i in enumerate(ids)}
    uf = UnionFind(len(ids))
    shape = values.shape
    if values.ndim == 1:
        pair = flat_cand[:-1] & flat_cand[1:] & (flat_vals[:-1] == flat_vals[1:])
        for i in np.flatnonzero(pair):
            uf.union(pos[int(i)], pos[int(i) + 1])
    else:
        ncols = shape[1]
        right = cand[:, :-1] & cand[:, 1:] & (values[:, :-1] == values[:, 1:])
        for rr, cc in zip(*np.nonzero(right)):
            i = rr * ncols + cc
            uf.union(pos[i], pos[i + 1])
        down = cand[:-1, :] & cand[1:, :] & (values[:-1, :] == values[1:, :])
        for rr, cc in zip(*np.nonzero(down)):
            i = rr * ncols + cc
            uf.union(pos[i], pos[i + ncols])
    reps: dict[int, int] = {}
    for k, i in enumerate(ids):
        root = uf.find(k)
        if root not in reps:  # ids are in flat order, so the first hit is the smallest index
            reps[root] = int(i)
    minima = tuple(
        (grid.point(i), float(flat_vals[i])) for i in sorted(reps.values())
    )
    return LocalMinimaReport(minima=minima, count=len(minima))


# ---------------------------------------------------------------------------
# The multiplicity alternative


@dataclass
class AlternativeReport:
    """Either an equilibrium point is certified, or a run of parameter
    values with two-well section functions is exhibited."""

    outcome: str  # 'assertion_a' | 'assertion_b' | 'inconclusive'
    equilibrium: "EquilibriumResult | None"
    run_interval: tuple[float, float] | None
    qualifying: tuple[float, ...]
    details: str = ""


def alternative_check(
    prob: "Problem",
    grid: "GridDomain",
    h: "HSelector",
    lambda_samples: int = 33,
    *,
    thresholds: int = 16,
    min_run: int = 2,
) -> AlternativeReport:
    """Certify one branch of the alternative.

    First tries the equilibrium construction (residual within tolerance).
    If that fails, sweeps sampled parameter values looking for a run whose
    section functions each have a compact disconnected sublevel set and at
    least two local minima.
    """
    from . import duality
    from .problem import field_values, section_values

    _, psi_vals, _ = field_values(prob, grid)
    if np.min(np.abs(psi_vals)) <= prob.tolerances.psi_zero:
        raise ValueError("the alternative requires psi to be nonzero on the grid")

    eq = None
    try:
        eq = duality.find_equilibrium(prob, grid, h)
        if eq.certified:
            return AlternativeReport(
                outcome="assertion_a",
                equilibrium=eq,
                run_interval=None,
                qualifying=(),
                details=f"equilibrium residual {eq.residual:.3e} within tolerance",
            )
        detail_a = f"equilibrium residual {eq.residual:.3e} above tolerance"
    except (ValueError, duality.PsiZeroError) as exc:
        detail_a = f"equilibrium construction failed: {exc}"

    dom = prob.curve.domain
    lo = max(dom.lo, -64.0)
    hi = min(dom.hi, 64.0)
    pad = (hi - lo) / (lambda_samples + 1)
    lams = lo + pad * np.arange(1, lambda_samples + 1)

    qualifying = []
    flags = []
    for lam in lams:
        vals = section_values(prob, grid, float(lam))
        report = local_minima(vals, grid)
        twowell = False
        if report.count >= 2:
            levels = np.unique(np.quantile(vals.ravel(), np.linspace(0.0, 1.0, thresholds)))
            vmin = float(np.min(vals))
            for r in levels:
                if r <= vmin:
                    continue
                an = sublevel_components(vals, float(r), strict=False)
                if an.compact_flag and an.component_count >= 2:
                    twowell = True
                    break
        flags.append(twowell)
        if twowell:
            qualifying.append(float(lam))

    best_run = _longest_run(flags)
    if best_run is not None and best_run[1] - best_run[0] + 1 >= min_run:
        i0, i1 = best_run
        return AlternativeReport(
            outcome="assertion_b",
            equilibrium=eq,
            run_interval=(float(lams[i0]), float(lams[i1])),
            qualifying=tuple(qualifying),
            details=detail_a + "; two-well sections found on a sampled parameter run",
        )
    return AlternativeReport(
        outcome="inconclusive",
        equilibrium=eq,
        run_interval=None,
        qualifying=tuple(qualifying),
        details=detail_a + "; no sufficient run of two-well sections found",
    )


def _longest_run(flags: list[bool]) -> tuple[int, int] | None:
    best = None
    start = None
    for i, f in enumerate(flags + [False]):
        if f and start is None:
            start = i
        elif not f and start is not None:
            if best is None or (i - 1 - start) > (best[1] - best[0]):
                best = (start, i - 1)
            start = None
    return best


def write_labels_csv(grid: "GridDomain", labels: np.ndarray, path: str) -> None:
    """Write the labeled sublevel mask as CSV (coordinates + component label)."""
    axes_names = [f"x{k + 1}" for k in range(grid.dim)]
    labels = np.asarray(labels)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(axes_names + ["label"])
        flat = labels.ravel()
        for i in range(flat.size):
            point = grid.point(i)
            writer.writerow([format(v, ".12g") for v in point] + [int(flat[i])])

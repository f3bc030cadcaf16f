"""Parameter curves and their slope-ratio profiles.

A problem family is the one-parameter curve ``lambda -> (alpha, beta)`` on
an interval.  The key derived object is the slope ratio
``g = beta' / alpha'``: when g is strictly monotone, inverting it picks the
maximizing parameter for each point of the domain.  This module samples g,
classifies its direction, estimates its range (including unbounded ends),
inverts it numerically, and runs the sampled hypothesis checks that decide
whether the closed-form envelope and the minimax equality are trustworthy.

All monotonicity and sign conditions are *sampled* certificates: exact
monotonicity of a black-box g is not decidable numerically, and the
reports say so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .expr import EvaluationError, Expression, evaluate

if TYPE_CHECKING:  # pragma: no cover
    from .problem import GridDomain, Problem

__all__ = [
    "Interval",
    "ParamCurve",
    "GProfile",
    "HypothesisReport",
    "FamilyError",
    "MonotonicityError",
    "DerivativeError",
    "InversionRangeError",
    "g_value",
    "build_g_profile",
    "g_inverse",
    "check_hypotheses",
]

ALPHA_PRIME_TOL = 1e-12  # |alpha'| at or below this counts as a vanishing derivative

_SAMPLE_WINDOW = 64.0  # finite sampling half-width used when the curve interval is unbounded


class FamilyError(ValueError):
    pass


class MonotonicityError(FamilyError):
    """The sampled slope ratio is not strictly monotone."""


class DerivativeError(FamilyError):
    """alpha' vanishes (or a derivative is not finite) where g is needed."""


class InversionRangeError(FamilyError):
    """Requested value lies outside the range of the sampled slope ratio."""


# ---------------------------------------------------------------------------
# Intervals


@dataclass(frozen=True)
class Interval:
    """A real interval with endpoint flags; infinite ends are always open."""

    lo: float
    hi: float
    closed_lo: bool = True
    closed_hi: bool = True

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            raise ValueError(f"invalid interval endpoints [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if math.isinf(lo):
            object.__setattr__(self, "closed_lo", False)
        if math.isinf(hi):
            object.__setattr__(self, "closed_hi", False)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def is_compact(self) -> bool:
        return (
            math.isfinite(self.lo)
            and math.isfinite(self.hi)
            and self.closed_lo
            and self.closed_hi
        )

    def interior(self) -> "Interval":
        return Interval(self.lo, self.hi, False, False)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        lo_ok = x > self.lo if not self.closed_lo else x >= self.lo - tol
        hi_ok = x < self.hi if not self.closed_hi else x <= self.hi + tol
        return lo_ok and hi_ok

    def intersect(self, lo: float, hi: float) -> "Interval | None":
        """Intersection with the closed interval [lo, hi], or None if empty."""
        new_lo = max(self.lo, lo)
        new_hi = min(self.hi, hi)
        if not new_lo < new_hi:
            return None
        closed_lo = self.closed_lo if new_lo == self.lo else True
        closed_hi = self.closed_hi if new_hi == self.hi else True
        return Interval(new_lo, new_hi, closed_lo, closed_hi)

    def __str__(self) -> str:
        left = "[" if self.closed_lo else "("
        right = "]" if self.closed_hi else ")"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


# ---------------------------------------------------------------------------
# Parameter curves


@dataclass(frozen=True)
class ParamCurve:
    """The coefficient curve ``lambda -> (alpha(lambda), beta(lambda))``.

    ``alpha_prime``/``beta_prime`` are optional derivative expressions;
    when absent, central finite differences with step ``1e-6*max(1,|x|)``
    are used.  ``deriv_domain`` is the sub-interval on which derivatives
    are declared to exist (defaults to the open interior); supplying it
    with closed finite ends lets g be evaluated exactly at those ends.
    """

    alpha: Expression
    beta: Expression
    domain: Interval
    alpha_prime: Expression | None = None
    beta_prime: Expression | None = None
    deriv_domain: Interval | None = None

    def __post_init__(self):
        for name, e in (("alpha", self.alpha), ("beta", self.beta),
                        ("alpha_prime", self.alpha_prime), ("beta_prime", self.beta_prime)):
            if e is None:
                continue
            extra = e.variables() - {"lambda"}
            if extra:
                raise ValueError(f"{name} may only reference 'lambda', found {sorted(extra)}")
        if self.deriv_domain is not None:
            a = self.deriv_domain
            if a.lo < self.domain.lo or a.hi > self.domain.hi:
                raise ValueError("deriv_domain must be contained in the curve domain")

    def a_set(self) -> Interval:
        return self.deriv_domain if self.deriv_domain is not None else self.domain.interior()

    def alpha_at(self, lam):
        return _eval_lambda(self.alpha, lam)

    def beta_at(self, lam):
        return _eval_lambda(self.beta, lam)

    def alpha_prime_at(self, lam):
        if self.alpha_prime is not None:
            return _eval_lambda(self.alpha_prime, lam)
        return _central_diff(self.alpha, lam, self.domain)

    def beta_prime_at(self, lam):
        if self.beta_prime is not None:
            return _eval_lambda(self.beta_prime, lam)
        return _central_diff(self.beta, lam, self.domain)

    @property
    def has_exact_derivatives(self) -> bool:
        return self.alpha_prime is not None and self.beta_prime is not None


def _eval_lambda(e: Expression, lam):
    """Evaluate a lambda-expression, broadcasting constants to array inputs."""
    out = evaluate(e, {"lambda": lam})
    if np.ndim(lam) > 0 and np.ndim(out) == 0:
        return np.full(np.shape(lam), float(out))
    return out


def _central_diff(e: Expression, lam, domain: Interval):
    lam_arr = np.asarray(lam, dtype=float)
    h = 1e-6 * np.maximum(1.0, np.abs(lam_arr))
    room = np.minimum(lam_arr - domain.lo, domain.hi - lam_arr) / 2.0
    h = np.minimum(h, room)
    if np.any(h <= 0):
        raise DerivativeError(
            "cannot take a finite difference at the interval boundary; "
            "supply derivative expressions instead"
        )
    out = (evaluate(e, {"lambda": lam_arr + h}) - evaluate(e, {"lambda": lam_arr - h})) / (2.0 * h)
    if np.ndim(lam) == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# Slope-ratio evaluation and profiling


def g_value(p: ParamCurve, lam):
    """The slope ratio beta'(lam)/alpha'(lam); scalar or elementwise on arrays."""
    try:
        a1 = p.alpha_prime_at(lam)
        b1 = p.beta_prime_at(lam)
    except EvaluationError as exc:
        raise DerivativeError(f"derivative evaluation failed: {exc}") from exc
    if np.any(np.abs(a1) <= ALPHA_PRIME_TOL):
        raise DerivativeError(
            f"alpha' vanishes (|alpha'| <= {ALPHA_PRIME_TOL:g}) on the requested parameters; "
            "the slope ratio is undefined there"
        )
    g = np.asarray(b1, dtype=float) / np.asarray(a1, dtype=float)
    if not np.all(np.isfinite(g)):
        raise DerivativeError("non-finite slope ratio")
    if np.ndim(lam) == 0:
        return float(g)
    return g


@dataclass(eq=False)
class GProfile:
    """Sampled profile of the slope ratio on the interior of the curve interval.

    ``gamma``/``delta`` estimate inf/sup of g over the open interior
    (extended reals when the ratio is unbounded); ``sampled_min/max`` keep
    the clipped finite range actually observed.  ``lam_ext``/``g_ext`` add
    endpoint-approach probes to the uniform samples so that inversion can
    bracket values near the ends.
    """

    curve: ParamCurve
    direction: str  # 'increasing' | 'decreasing'
    gamma: float
    delta: float
    sample_count: int
    lam_samples: np.ndarray = field(repr=False)
    g_samples: np.ndarray = field(repr=False)
    sampled_min: float = 0.0
    sampled_max: float = 0.0
    lam_ext: np.ndarray = field(repr=False, default=None)
    g_ext: np.ndarray = field(repr=False, default=None)
    lo_limit: float = 0.0  # g limit toward the low-lambda end
    hi_limit: float = 0.0
    lo_exact: bool = False  # limit evaluated exactly at a closed end of the derivative set
    hi_exact: bool = False
    lam_lo_reach: float = 0.0  # closest lambda at which g was actually evaluated
    lam_hi_reach: float = 0.0

    @property
    def increasing(self) -> bool:
        return self.direction == "increasing"


def _sampling_window(a_set: Interval) -> tuple[float, float]:
    lo, hi = a_set.lo, a_set.hi
    if math.isfinite(lo) and math.isfinite(hi):
        return lo, hi
    if math.isfinite(lo):
        return lo, lo + max(2 * _SAMPLE_WINDOW, 2 * abs(lo))
    if math.isfinite(hi):
        return hi - max(2 * _SAMPLE_WINDOW, 2 * abs(hi)), hi
    return -_SAMPLE_WINDOW, _SAMPLE_WINDOW


def _probe_finite_end(p: ParamCurve, endpoint: float, side: str, start_dist: float,
                      min_dist: float) -> tuple[list[float], list[float]]:
    """Evaluate g at a geometric sequence of points approaching ``endpoint``."""
    lams, gs = [], []
    dist = start_dist
    sign = 1.0 if side == "lo" else -1.0
    while dist >= min_dist:
        lam = endpoint + sign * dist
        try:
            gs.append(g_value(p, lam))
            lams.append(lam)
        except (DerivativeError, EvaluationError):
            break
        dist /= 8.0
    return lams, gs


def _probe_infinite_end(p: ParamCurve, anchor: float, side: str) -> tuple[list[float], list[float]]:
    lams, gs = [], []
    mag = max(1.0, abs(anchor))
    sign = -1.0 if side == "lo" else 1.0
    while mag <= 1e9:
        lam = sign * mag
        if (side == "lo" and lam < anchor) or (side == "hi" and lam > anchor):
            try:
                gs.append(g_value(p, lam))
                lams.append(lam)
            except (DerivativeError, EvaluationError):
                break
        mag *= 4.0
    return lams, gs


def _classify_limit(gs: list[float], reference: float) -> float:
    """Finite limit estimate or +-inf when the probe values keep growing."""
    if not gs:
        return reference
    if len(gs) >= 3:
        tiny = 1e-300
        r1 = abs(gs[-1]) / max(abs(gs[-2]), tiny)
        r2 = abs(gs[-2]) / max(abs(gs[-3]), tiny)
        if (r1 >= 1.5 and r2 >= 1.5 and abs(gs[-1]) > 10 * max(1.0, abs(gs[0]))) or abs(
            gs[-1]
        ) > 1e10:
            return math.copysign(math.inf, gs[-1])
    return gs[-1]


def build_g_profile(p: ParamCurve, samples: int = 256) -> GProfile:
    """Sample the slope ratio on a uniform interior grid and classify it.

    Raises :class:`MonotonicityError` when consecutive sampled differences
    do not share a strict uniform sign, and :class:`DerivativeError` when
    alpha' vanishes anywhere it is evaluated.
    """
    if samples < 16:
        raise ValueError("samples must be at least 16")
    a_set = p.a_set()
    wlo, whi = _sampling_window(a_set)
    pad = (whi - wlo) / (samples + 1)
    lam = wlo + pad * np.arange(1, samples + 1, dtype=float)
    g = np.asarray(g_value(p, lam), dtype=float)

    diffs = np.diff(g)
    if np.all(diffs > 0):
        direction = "increasing"
    elif np.all(diffs < 0):
        direction = "decreasing"
    else:
        raise MonotonicityError(
            "sampled slope ratio is not strictly monotone "
            f"(direction changes or repeats among {samples} interior samples)"
        )

    width = whi - wlo
    min_dist = width * 1e-12 if p.has_exact_derivatives else max(
        width * 1e-9, 2e-5 * max(1.0, abs(wlo), abs(whi))
    )

    sides = {}
    for side, wend, dom_end, closed in (
        ("lo", wlo, a_set.lo, a_set.closed_lo),
        ("hi", whi, a_set.hi, a_set.closed_hi),
    ):
        ref = g[0] if side == "lo" else g[-1]
        ref_lam = lam[0] if side == "lo" else lam[-1]
        exact = False
        if closed and math.isfinite(dom_end):
            try:
                limit = g_value(p, dom_end)
                sides[side] = (limit, True, dom_end, [dom_end], [limit])
                continue
            except (DerivativeError, EvaluationError):
                pass
        if math.isfinite(dom_end):
            plams, pgs = _probe_finite_end(p, dom_end, side, pad, min_dist)
        else:
            plams, pgs = _probe_infinite_end(p, wend, side)
        limit = _classify_limit(pgs, ref)
        reach = plams[-1] if plams else ref_lam
        sides[side] = (limit, exact, reach, plams, pgs)

    lo_limit, lo_exact, lo_reach, lo_plams, lo_pgs = sides["lo"]
    hi_limit, hi_exact, hi_reach, hi_plams, hi_pgs = sides["hi"]

    # extended table: low-side probes (ordered by lambda), samples, high-side probes
    ext_lam = np.concatenate([np.asarray(lo_plams[::-1]), lam, np.asarray(hi_plams)])
    ext_g = np.concatenate([np.asarray(lo_pgs[::-1]), g, np.asarray(hi_pgs)])
    order = np.argsort(ext_lam)
    ext_lam, ext_g = ext_lam[order], ext_g[order]
    keep = np.concatenate([[True], np.diff(ext_lam) > 0])
    ext_lam, ext_g = ext_lam[keep], ext_g[keep]

    gamma = min(lo_limit, hi_limit)
    delta = max(lo_limit, hi_limit)
    return GProfile(
        curve=p,
        direction=direction,
        gamma=gamma,
        delta=delta,
        sample_count=samples,
        lam_samples=lam,
        g_samples=g,
        sampled_min=float(np.min(g)),
        sampled_max=float(np.max(g)),
        lam_ext=ext_lam,
        g_ext=ext_g,
        lo_limit=lo_limit,
        hi_limit=hi_limit,
        lo_exact=lo_exact,
        hi_exact=hi_exact,
        lam_lo_reach=lo_reach,
        lam_hi_reach=hi_reach,
    )


# ---------------------------------------------------------------------------
# Inversion


def _closed_end_match(gp: GProfile, mu: float) -> float | None:
    scale = max(1.0, abs(mu))
    if gp.lo_exact and abs(mu - gp.lo_limit) <= 1e-12 * scale:
        return gp.lam_lo_reach
    if gp.hi_exact and abs(mu - gp.hi_limit) <= 1e-12 * scale:
        return gp.lam_hi_reach
    return None


def _extend_bracket(gp: GProfile, mu: float, side: str) -> tuple[float, float]:
    """Bracket mu beyond the tabulated range, walking toward an infinite end."""
    p = gp.curve
    if side == "lo":
        lam_edge, g_edge = gp.lam_ext[0], gp.g_ext[0]
        dom_end = p.a_set().lo
    else:
        lam_edge, g_edge = gp.lam_ext[-1], gp.g_ext[-1]
        dom_end = p.a_set().hi
    if math.isfinite(dom_end):
        # the answer sits between the closest probe and the endpoint; the
        # remaining gap is below the probing floor, so clamp to the probe
        return lam_edge, lam_edge
    step = max(1.0, abs(lam_edge))
    lam_prev = lam_edge
    for _ in range(60):
        lam_next = lam_prev - step if side == "lo" else lam_prev + step
        try:
            g_next = g_value(p, lam_next)
        except (DerivativeError, EvaluationError):
            return lam_prev, lam_prev
        crossed = (g_next - mu) * (g_edge - mu) <= 0
        if crossed:
            return (lam_next, lam_prev) if side == "lo" else (lam_prev, lam_next)
        lam_prev = lam_next
        step *= 4.0
    return lam_prev, lam_prev


def g_inverse(gp: GProfile, mu: float) -> float:
    """Invert the monotone slope ratio by bisection.

    Accepts mu strictly inside (gamma, delta); values matching an exactly
    evaluated closed endpoint are mapped to that endpoint.  The bracket is
    tightened to near machine precision (well inside the documented
    1e-12 * max(1, width) contract).
    """
    mu = float(mu)
    end = _closed_end_match(gp, mu)
    if end is not None:
        return end
    if not (gp.gamma < mu < gp.delta):
        raise InversionRangeError(
            f"mu={mu:g} outside the sampled slope-ratio range ({gp.gamma:g}, {gp.delta:g})"
        )

    inc = gp.increasing
    g_asc = gp.g_ext if inc else gp.g_ext[::-1]
    lam_asc = gp.lam_ext if inc else gp.lam_ext[::-1]
    idx = int(np.searchsorted(g_asc, mu))
    if idx == 0:
        side = "lo" if inc else "hi"
        lo_l, hi_l = _extend_bracket(gp, mu, side)
    elif idx == len(g_asc):
        side = "hi" if inc else "lo"
        lo_l, hi_l = _extend_bracket(gp, mu, side)
    else:
        lo_l = min(lam_asc[idx - 1], lam_asc[idx])
        hi_l = max(lam_asc[idx - 1], lam_asc[idx])
    if lo_l == hi_l:
        return float(lo_l)
    return _bisect_scalar(gp, mu, float(lo_l), float(hi_l))


def _bisect_scalar(gp: GProfile, mu: float, lo: float, hi: float) -> float:
    inc = gp.increasing
    p = gp.curve
    for _ in range(200):
        if hi - lo <= 8 * np.finfo(float).eps * max(1.0, abs(lo), abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        gm = g_value(p, mid)
        if (gm < mu) == inc:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def g_inverse_vec(gp: GProfile, mu: np.ndarray) -> np.ndarray:
    """Vectorized inversion for values strictly inside the sampled range.

    Out-of-table values are clamped to the closest evaluated parameter
    (their distance to the true preimage is below the probing floor).
    """
    mu = np.asarray(mu, dtype=float)
    inc = gp.increasing
    g_asc = gp.g_ext if inc else gp.g_ext[::-1]
    lam_asc = gp.lam_ext if inc else gp.lam_ext[::-1]
    idx = np.searchsorted(g_asc, mu)
    idx_in = np.clip(idx, 1, len(g_asc) - 1)
    lo = np.minimum(lam_asc[idx_in - 1], lam_asc[idx_in])
    hi = np.maximum(lam_asc[idx_in - 1], lam_asc[idx_in])
    below = idx == 0
    above = idx == len(g_asc)
    lo = np.where(below, lam_asc[0], lo)
    hi = np.where(below, lam_asc[0], hi)
    lo = np.where(above, lam_asc[-1], lo)
    hi = np.where(above, lam_asc[-1], hi)

    p = gp.curve
    eps = np.finfo(float).eps
    for _ in range(200):
        widths = hi - lo
        tol = 8 * eps * np.maximum(1.0, np.maximum(np.abs(lo), np.abs(hi)))
        active = widths > tol
        if not np.any(active):
            break
        mid = 0.5 * (lo + hi)
        gm = np.asarray(g_value(p, mid), dtype=float)
        go_up = (gm < mu) == inc
        lo = np.where(active & go_up, mid, lo)
        hi = np.where(active & ~go_up, mid, hi)
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Hypothesis report


@dataclass
class HypothesisReport:
    """Outcome of the sampled hypothesis checks for one problem.

    ``i1_grid_connected`` records, per sampled parameter value, whether all
    swept sublevel sets of that family member were connected on the grid
    ('pass'/'fail'; 'skipped' above two dimensions).  ``i2_monotone`` is
    the sampled strict-monotonicity certificate for the slope ratio.
    ``sign_condition`` classifies the uniform sign of alpha'(lam)*psi(x)
    ('i3' with increasing g and negative products, 'i4' with decreasing g
    and positive products, else 'neither').  ``range_condition_i2prime``
    asks whether -phi/psi stays inside the slope-ratio range everywhere
    psi is nonzero; it matters only when the curve interval is not
    compact.
    """

    i1_grid_connected: tuple[tuple[float, str], ...]
    i2_monotone: bool
    sign_condition: str
    range_condition_i2prime: bool
    notes: str = ""

    @property
    def i1_ok(self) -> bool:
        return all(status != "fail" for _, status in self.i1_grid_connected)

    @property
    def holds_compact(self) -> bool:
        """All checks needed for the closed form + duality on a compact interval."""
        return self.i2_monotone and self.sign_condition in ("i3", "i4") and self.i1_ok

    @property
    def holds_general(self) -> bool:
        """Checks for a general (possibly unbounded) interval, incl. the range condition."""
        return self.holds_compact and self.range_condition_i2prime

    def closed_form_ok(self, compact: bool) -> bool:
        """Pointwise closed-form validity: the sublevel checks are not needed."""
        pointwise = self.i2_monotone and self.sign_condition in ("i3", "i4")
        return pointwise if compact else (pointwise and self.range_condition_i2prime)


def check_hypotheses(
    prob: "Problem",
    gp: GProfile | None,
    grid: "GridDomain | None" = None,
    *,
    lambda_checks: int = 9,
    thresholds: int = 16,
) -> HypothesisReport:
    """Run every sampled hypothesis check and report outcomes (never raises).

    Pass ``gp=None`` to let the profile be built here; a monotonicity or
    derivative failure is then reported as ``i2_monotone=False`` instead
    of propagating.
    """
    from . import topology
    from .problem import field_values

    grid = grid if grid is not None else prob.grid
    notes: list[str] = []

    if gp is None:
        try:
            gp = build_g_profile(prob.curve)
        except (MonotonicityError, DerivativeError) as exc:
            gp = None
            notes.append(str(exc))
    i2 = gp is not None

    phi_vals, psi_vals, _ = field_values(prob, grid)
    psi_flat = np.asarray(psi_vals).ravel()
    psi_tol = prob.tolerances.psi_zero
    nonzero = np.abs(psi_flat) > psi_tol

    # sign condition on sampled (lambda, x) products
    sign_condition = "neither"
    if i2:
        take = np.linspace(0, gp.lam_samples.size - 1, min(33, gp.lam_samples.size)).astype(int)
        lam_sub = gp.lam_samples[take]
        try:
            a1 = np.asarray(gp.curve.alpha_prime_at(lam_sub), dtype=float)
        except (DerivativeError, EvaluationError) as exc:
            a1 = None
            notes.append(f"sign condition not evaluable: {exc}")
        if a1 is not None:
            if not np.any(nonzero):
                sign_condition = "i3" if gp.increasing else "i4"
                notes.append("psi vanishes on the whole grid; the sign condition is vacuous")
            else:
                products = np.outer(a1, psi_flat[nonzero])
                if gp.increasing and np.all(products < 0):
                    sign_condition = "i3"
                elif not gp.increasing and np.all(products > 0):
                    sign_condition = "i4"

    # range condition: -phi/psi inside the slope-ratio range wherever psi != 0
    range_ok = False
    if i2:
        if not np.any(nonzero):
            range_ok = True
        else:
            mu = -np.asarray(phi_vals).ravel()[nonzero] / psi_flat[nonzero]
            lo_b, hi_b = gp.gamma, gp.delta
            lo_closed = gp.lo_exact if gp.lo_limit == lo_b else gp.hi_exact
            hi_closed = gp.hi_exact if gp.hi_limit == hi_b else gp.lo_exact
            lo_tol = 1e-9 * max(1.0, abs(lo_b)) if math.isfinite(lo_b) else 0.0
            hi_tol = 1e-9 * max(1.0, abs(hi_b)) if math.isfinite(hi_b) else 0.0
            ok_lo = mu >= lo_b - lo_tol if lo_closed else mu > lo_b
            ok_hi = mu <= hi_b + hi_tol if hi_closed else mu < hi_b
            range_ok = bool(np.all(ok_lo & ok_hi))
    elif not np.any(nonzero):
        range_ok = True

    # sublevel connectivity per sampled lambda
    i1: list[tuple[float, str]] = []
    lam_checks_arr = _lambda_check_points(prob, gp, lambda_checks)
    if grid.dim > 2:
        i1 = [(float(l), "skipped") for l in lam_checks_arr]
        notes.append("sublevel connectivity skipped: grids above 2 dimensions are unsupported")
    else:
        from .problem import section_values

        for lam in lam_checks_arr:
            vals = section_values(prob, grid, float(lam))
            ok = topology.inf_connected_check(vals, thresholds=thresholds)
            i1.append((float(lam), "pass" if ok else "fail"))

    notes.append("monotonicity and sign conditions are sampled, not proved")
    notes.append("auxiliary lower-semicontinuity/compactness assumptions are taken as given on a finite grid")
    return HypothesisReport(
        i1_grid_connected=tuple(i1),
        i2_monotone=i2,
        sign_condition=sign_condition,
        range_condition_i2prime=range_ok,
        notes="; ".join(notes),
    )


def _lambda_check_points(prob: "Problem", gp: GProfile | None, count: int) -> np.ndarray:
    if gp is not None:
        take = np.linspace(0, gp.lam_samples.size - 1, min(count, gp.lam_samples.size)).astype(int)
        return gp.lam_samples[take]
    wlo, whi = _sampling_window(prob.curve.domain.interior())
    pad = (whi - wlo) / (count + 1)
    return wlo + pad * np.arange(1, count + 1, dtype=float)

"""Pointwise evaluation of the upper envelope.

Two routes are provided and kept deliberately independent so they can
cross-check each other:

* the closed form: invert the slope ratio at -phi(x)/psi(x) (clamping to
  the interval ends per the sign case) and evaluate the family at that
  parameter;
* brute force: maximize the family over a parameter grid, refined by
  golden section around the incumbent (justified only when the sampled
  hypotheses certify a single sign change of the section derivative).

Points with psi(x) = 0 form their own branch: on a compact interval the
supremum sits at one of the two endpoint coefficients; on an unbounded
interval it is the supremum of alpha alone scaled by phi(x), which may be
+inf and is reported as such rather than raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._search import exhaust_maximize, golden_max, golden_max_vec
from .expr import evaluate
from .family import GProfile, Interval, InversionRangeError, g_inverse, g_inverse_vec
from .problem import GridDomain, Problem, field_values, values_at

__all__ = [
    "HSelector",
    "EnvelopeValue",
    "make_selector",
    "h_select",
    "envelope_closed_form",
    "envelope_brute",
    "closed_form_values",
    "brute_values",
]


@dataclass(frozen=True, eq=False)
class HSelector:
    """Total selector mapping a ratio to the maximizing parameter.

    Inside the sampled slope-ratio range it is the numeric inverse of g;
    outside it clamps to an interval end according to the sign case:
    'i3' (increasing ratio) sends low values to ``a`` and high values to
    ``b``; 'i4' (decreasing ratio) does the opposite.
    """

    profile: GProfile
    a: float
    b: float
    sign_case: str  # 'i3' | 'i4'

    def __post_init__(self):
        if self.sign_case not in ("i3", "i4"):
            raise ValueError("sign_case must be 'i3' or 'i4'")
        wants_increasing = self.sign_case == "i3"
        if self.profile.increasing != wants_increasing:
            raise ValueError(
                f"sign case {self.sign_case} pairs with a "
                f"{'increasing' if wants_increasing else 'decreasing'} slope ratio"
            )


def make_selector(gp: GProfile, sign_case: str) -> HSelector:
    dom = gp.curve.domain
    return HSelector(profile=gp, a=dom.lo, b=dom.hi, sign_case=sign_case)


def _clamp_end(h: HSelector, low_side: bool) -> float:
    # low mu -> a under i3, b under i4; high mu mirrors
    if h.sign_case == "i3":
        end = h.a if low_side else h.b
    else:
        end = h.b if low_side else h.a
    if math.isinf(end):
        raise InversionRangeError(
            "ratio outside the slope-ratio range with an unbounded interval end; "
            "the range condition does not hold for this problem"
        )
    return end


def h_select(h: HSelector, mu: float) -> float:
    """Evaluate the selector; total on the real line for compact intervals."""
    mu = float(mu)
    gp = h.profile
    if gp.gamma < mu < gp.delta:
        return g_inverse(gp, mu)
    if mu <= gp.gamma:
        matched = _exact_end(gp, mu)
        return matched if matched is not None else _clamp_end(h, low_side=True)
    matched = _exact_end(gp, mu)
    return matched if matched is not None else _clamp_end(h, low_side=False)


def _exact_end(gp: GProfile, mu: float):
    scale = max(1.0, abs(mu))
    if gp.lo_exact and abs(mu - gp.lo_limit) <= 1e-12 * scale:
        return gp.lam_lo_reach
    if gp.hi_exact and abs(mu - gp.hi_limit) <= 1e-12 * scale:
        return gp.lam_hi_reach
    return None


@dataclass(frozen=True)
class EnvelopeValue:
    """One envelope evaluation: value, maximizing parameter, branch taken.

    ``tag`` is 'interior' for an interior maximizer, 'endpoint_lo'/'_hi'
    for a clamped end, 'whole_interval' when the family is constant in the
    parameter (phi(x) = psi(x) = 0), and 'divergent' when the supremum is
    +inf over an unbounded interval.
    """

    value: float
    argmax_lambda: float | None
    tag: str
    branch: str  # 'generic' | 'psi_zero'
    trace: tuple[tuple[Interval, float], ...] = ()


def _endpoint_tag(dom: Interval, lam: float) -> str:
    span = max(1.0, abs(dom.lo), abs(dom.hi))
    if math.isfinite(dom.lo) and abs(lam - dom.lo) <= 1e-12 * span:
        return "endpoint_lo"
    if math.isfinite(dom.hi) and abs(lam - dom.hi) <= 1e-12 * span:
        return "endpoint_hi"
    return "interior"


def envelope_closed_form(prob: Problem, h: HSelector, x) -> EnvelopeValue:
    """Closed-form envelope at one point.

    Valid when the sampled hypotheses hold (monotone slope ratio plus the
    sign condition; plus the range condition on non-compact intervals).
    """
    phi_v, psi_v, om = values_at(prob, x)
    tol = prob.tolerances.psi_zero
    dom = prob.curve.domain
    if abs(psi_v) <= tol:
        return _psi_zero_value(prob, phi_v, om)
    mu = -phi_v / psi_v
    lam = h_select(h, mu)
    value = float(prob.curve.alpha_at(lam)) * phi_v + float(prob.curve.beta_at(lam)) * psi_v + om
    return EnvelopeValue(value, lam, _endpoint_tag(dom, lam), "generic")


def _psi_zero_value(prob: Problem, phi_v: float, om: float) -> EnvelopeValue:
    tol = prob.tolerances.psi_zero
    dom = prob.curve.domain
    if abs(phi_v) <= tol:
        return EnvelopeValue(om, None, "whole_interval", "psi_zero")
    if dom.is_compact:
        va = float(prob.curve.alpha_at(dom.lo)) * phi_v + om
        vb = float(prob.curve.alpha_at(dom.hi)) * phi_v + om
        if va >= vb:
            return EnvelopeValue(va, dom.lo, "endpoint_lo", "psi_zero")
        return EnvelopeValue(vb, dom.hi, "endpoint_hi", "psi_zero")
    # unbounded interval: supremum of alpha(lam)*phi alone, may be +inf
    res = _max_scalar_family(prob, phi_v, 0.0, om, lambda_grid_size=257, refine=True)
    return EnvelopeValue(res.value, res.argmax_lambda, res.tag, "psi_zero", res.trace)


def envelope_brute(prob: Problem, x, lambda_grid_size: int = 257, refine: bool = True) -> EnvelopeValue:
    """Grid + golden-section supremum of the family over the interval at one point.

    ``refine=False`` reports the raw grid maximum; use it when the sampled
    hypotheses failed and unimodality of the section is not certified.
    Unbounded intervals are exhausted by doubling windows; a supremum that
    keeps growing is reported as +inf with the 'divergent' tag.
    """
    if lambda_grid_size < 64:
        raise ValueError("lambda_grid_size must be at least 64")
    phi_v, psi_v, om = values_at(prob, x)
    tol = prob.tolerances.psi_zero
    value = _max_scalar_family(prob, phi_v, psi_v, om, lambda_grid_size, refine)
    branch = "psi_zero" if abs(psi_v) <= tol else "generic"
    if branch == value.branch:
        return value
    return EnvelopeValue(value.value, value.argmax_lambda, value.tag, branch, value.trace)


def _max_scalar_family(prob: Problem, phi_v: float, psi_v: float, om: float,
                       lambda_grid_size: int, refine: bool) -> EnvelopeValue:
    tol = prob.tolerances.psi_zero
    curve = prob.curve
    dom = curve.domain
    if abs(phi_v) <= tol and abs(psi_v) <= tol:
        return EnvelopeValue(om, None, "whole_interval", "generic")

    def section(lam):
        return np.asarray(curve.alpha_at(lam), dtype=float) * phi_v + np.asarray(
            curve.beta_at(lam), dtype=float
        ) * psi_v + om

    def eval_window(piece: Interval, prev):
        lams = np.linspace(piece.lo, piece.hi, lambda_grid_size)
        if prev is not None:
            lams = np.unique(np.append(lams, prev[1]))
        vals = section(lams)
        i = int(np.argmax(vals))
        best_lam, best_val = float(lams[i]), float(vals[i])
        if refine:
            # bracket by the uniform spacing: injected candidates can sit a
            # float-ulp from a grid node and must not shrink the bracket
            spacing = (piece.hi - piece.lo) / (lambda_grid_size - 1)
            lo = max(piece.lo, best_lam - spacing)
            hi = min(piece.hi, best_lam + spacing)
            glam, gval = golden_max(lambda l: float(section(l)), lo, hi)
            if gval > best_val:
                best_lam, best_val = float(glam), float(gval)
        if prev is not None and prev[0] > best_val:
            best_val, best_lam = prev
        return best_val, best_lam

    res = exhaust_maximize(dom, prob.window, eval_window,
                           stop_tol=prob.tolerances.exhaustion_stop)
    trace = res.trace if res.status != "compact" else ()
    if res.status == "diverged":
        return EnvelopeValue(math.inf, None, "divergent", "generic", trace)
    lam = float(res.aux)
    return EnvelopeValue(float(res.value), lam, _endpoint_tag(dom, lam), "generic", trace)


# ---------------------------------------------------------------------------
# Vectorized evaluation on grids (used by the duality scans and CSV export)


def closed_form_values(prob: Problem, h: HSelector, grid: GridDomain | None = None) -> np.ndarray:
    """Closed-form envelope sampled on a grid (vectorized inversion)."""
    grid = grid if grid is not None else prob.grid
    phi_a, psi_a, om_a = field_values(prob, grid)
    tol = prob.tolerances.psi_zero
    gp = h.profile
    curve = prob.curve
    out = np.empty(grid.shape, dtype=float)

    psi_zero = np.abs(psi_a) <= tol
    generic = ~psi_zero
    if np.any(generic):
        mu = np.where(generic, -phi_a / np.where(psi_zero, 1.0, psi_a), 0.0)
        lam = np.empty_like(mu)
        in_range = generic & (mu > gp.gamma) & (mu < gp.delta)
        low = generic & (mu <= gp.gamma)
        high = generic & (mu >= gp.delta)
        if np.any(in_range):
            lam[in_range] = g_inverse_vec(gp, mu[in_range])
        if np.any(low):
            lam[low] = _clamp_or_end(h, gp, low_side=True)
        if np.any(high):
            lam[high] = _clamp_or_end(h, gp, low_side=False)
        lam_g = lam[generic]
        alpha_g = np.asarray(curve.alpha_at(lam_g), dtype=float)
        beta_g = np.asarray(curve.beta_at(lam_g), dtype=float)
        out[generic] = alpha_g * phi_a[generic] + beta_g * psi_a[generic] + om_a[generic]

    if np.any(psi_zero):
        out[psi_zero] = _psi_zero_values(prob, phi_a[psi_zero], om_a[psi_zero])
    return out


def _clamp_or_end(h: HSelector, gp: GProfile, low_side: bool) -> float:
    # exact closed ends of the derivative set take precedence over clamping
    bound = gp.gamma if low_side else gp.delta
    if math.isfinite(bound):
        matched = _exact_end(gp, bound)
        if matched is not None:
            return matched
    return _clamp_end(h, low_side)


def _psi_zero_values(prob: Problem, phi_vals: np.ndarray, om_vals: np.ndarray) -> np.ndarray:
    tol = prob.tolerances.psi_zero
    dom = prob.curve.domain
    out = np.empty_like(phi_vals)
    zero = np.abs(phi_vals) <= tol
    out[zero] = om_vals[zero]
    nz = ~zero
    if not np.any(nz):
        return out
    if dom.is_compact:
        a_lo = float(prob.curve.alpha_at(dom.lo))
        a_hi = float(prob.curve.alpha_at(dom.hi))
        out[nz] = np.maximum(a_lo * phi_vals[nz], a_hi * phi_vals[nz]) + om_vals[nz]
        return out
    sup_alpha = _alpha_extremum(prob, maximize=True)
    inf_alpha = _alpha_extremum(prob, maximize=False)
    pos = nz & (phi_vals > 0)
    neg = nz & (phi_vals < 0)
    out[pos] = phi_vals[pos] * sup_alpha + om_vals[pos]
    out[neg] = phi_vals[neg] * inf_alpha + om_vals[neg]
    return out


def _alpha_extremum(prob: Problem, maximize: bool) -> float:
    sign = 1.0 if maximize else -1.0
    curve = prob.curve

    def eval_window(piece: Interval, prev):
        lams = np.linspace(piece.lo, piece.hi, 257)
        vals = sign * np.asarray(curve.alpha_at(lams), dtype=float)
        i = int(np.argmax(vals))
        lam, val = float(lams[i]), float(vals[i])
        glam, gval = golden_max(
            lambda l: sign * float(curve.alpha_at(l)),
            float(lams[max(0, i - 1)]),
            float(lams[min(len(lams) - 1, i + 1)]),
        )
        if gval > val:
            lam, val = float(glam), float(gval)
        if prev is not None and prev[0] > val:
            val, lam = prev
        return val, lam

    res = exhaust_maximize(curve.domain, prob.window, eval_window,
                           stop_tol=prob.tolerances.exhaustion_stop)
    if res.status == "diverged":
        return math.inf if maximize else -math.inf
    return sign * res.value


def brute_values(prob: Problem, grid: GridDomain | None = None, lambda_grid_size: int = 257,
                 refine: bool = False, extra_lambdas: tuple[float, ...] = ()) -> np.ndarray:
    """Grid-supremum envelope on a grid; optional vectorized golden refinement.

    The supremum is accumulated per window over an exhaustion schedule for
    unbounded intervals; points whose supremum keeps growing are +inf.
    """
    if lambda_grid_size < 64:
        raise ValueError("lambda_grid_size must be at least 64")
    grid = grid if grid is not None else prob.grid
    phi_a, psi_a, om_a = field_values(prob, grid)
    curve = prob.curve

    def section_vec(lam_arr):
        alpha = np.asarray(curve.alpha_at(lam_arr), dtype=float)
        beta = np.asarray(curve.beta_at(lam_arr), dtype=float)
        return alpha * phi_a + beta * psi_a + om_a

    def eval_window(piece: Interval, prev):
        lams = list(np.linspace(piece.lo, piece.hi, lambda_grid_size))
        # injected candidates join every window so the accumulated supremum
        # dominates the family member at those parameters on every point
        lams.extend(l for l in extra_lambdas if curve.domain.contains(l, tol=0.0))
        best = np.full(grid.shape, -math.inf)
        best_lam = np.full(grid.shape, lams[0])
        for lam in lams:
            vals = float(curve.alpha_at(lam)) * phi_a + float(curve.beta_at(lam)) * psi_a + om_a
            better = vals > best
            best = np.where(better, vals, best)
            best_lam = np.where(better, lam, best_lam)
        if refine:
            spacing = (piece.hi - piece.lo) / (lambda_grid_size - 1)
            lo = np.maximum(piece.lo, best_lam - spacing)
            hi = np.minimum(piece.hi, best_lam + spacing)
            glam, gval = golden_max_vec(section_vec, lo, hi)
            best = np.maximum(best, gval)
        if prev is not None:
            best = np.maximum(best, prev[1])
        return float(np.min(best)), best

    res = exhaust_maximize(curve.domain, prob.window, eval_window,
                           stop_tol=prob.tolerances.exhaustion_stop)
    if res.status == "diverged":
        # even the grid minimum keeps growing, so every point is unbounded above
        return np.full(grid.shape, math.inf)
    return np.asarray(res.aux, dtype=float)

"""Both sides of the minimax estimate, the gap report and equilibrium search.

``inner_inf`` minimizes one family member over the grid; ``sup_inf``
maximizes that inner value over the parameter interval (exhausting
unbounded intervals by doubling windows); ``inf_sup`` minimizes the
envelope over the grid.  ``duality_report`` couples the two sides so that
the reported values satisfy the one-sided estimate

    sup_inf <= inf_sup

by construction: the winning parameter of the sup side participates in
every envelope evaluation of the inf side, and the inf-side witness point
is folded back into the inner minimum at that parameter.  A violation
beyond the slack therefore indicates a solver bug, never a property of
the problem.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from ._search import exhaust_maximize, golden_max
from .envelope import HSelector, brute_values, closed_form_values
from .family import (
    DerivativeError,
    GProfile,
    HypothesisReport,
    Interval,
    InversionRangeError,
    MonotonicityError,
    build_g_profile,
    check_hypotheses,
    g_inverse,
)
from .envelope import h_select
from .problem import GridDomain, Problem, field_values, section_at, section_values

__all__ = [
    "DualityReport",
    "EquilibriumResult",
    "ConsistencyError",
    "PsiZeroError",
    "inner_inf",
    "sup_inf",
    "inf_sup",
    "duality_report",
    "find_equilibrium",
    "write_lambda_curve_csv",
    "write_envelope_csv",
]


class ConsistencyError(RuntimeError):
    """The coupled estimate failed beyond slack; indicates an internal bug."""


class PsiZeroError(ValueError):
    """psi vanishes somewhere it must not."""


# ---------------------------------------------------------------------------
# Inner minimization


def inner_inf(prob: Problem, lam: float, grid: GridDomain | None = None):
    """Minimum of the family member at ``lam`` over the grid.

    Grid scan first (ties to the smallest row-major index), then
    ``grid.refine_rounds`` rounds of re-scanning a one-cell neighborhood
    of the incumbent at full per-axis resolution.
    """
    grid = grid if grid is not None else prob.grid
    vals = section_values(prob, grid, lam)
    flat = int(np.argmin(vals))
    best_val = float(vals.flat[flat])
    best_point = grid.point(flat)
    spacing = grid.spacing()
    local = grid
    for _ in range(grid.refine_rounds):
        local = grid.refined_around(best_point, spacing)
        sub_vals = section_values(prob, local, lam)
        sub_flat = int(np.argmin(sub_vals))
        sub_val = float(sub_vals.flat[sub_flat])
        if sub_val < best_val:
            best_val = sub_val
            best_point = local.point(sub_flat)
        spacing = local.spacing()
    return best_val, best_point


# ---------------------------------------------------------------------------
# sup over the parameter of the inner minimum


def _sup_inf_full(prob: Problem, grid: GridDomain, lambda_grid_size: int):
    if lambda_grid_size < 64:
        raise ValueError("lambda_grid_size must be at least 64")

    def inner(lam: float) -> float:
        return inner_inf(prob, lam, grid)[0]

    def eval_window(piece: Interval, prev):
        lams = np.linspace(piece.lo, piece.hi, lambda_grid_size)
        if prev is not None:
            lams = np.unique(np.append(lams, prev[1]))
        vals = np.array([inner(float(l)) for l in lams])
        i = int(np.argmax(vals))
        best_lam, best_val = float(lams[i]), float(vals[i])
        spacing = (piece.hi - piece.lo) / (lambda_grid_size - 1)
        lo = max(piece.lo, best_lam - spacing)
        hi = min(piece.hi, best_lam + spacing)
        glam, gval = golden_max(inner, lo, hi)
        if gval > best_val:
            best_lam, best_val = float(glam), float(gval)
        if prev is not None and prev[0] > best_val:
            best_val, best_lam = prev
        return best_val, best_lam

    res = exhaust_maximize(prob.curve.domain, prob.window, eval_window,
                           stop_tol=prob.tolerances.exhaustion_stop)
    return res.value, res.aux, res.trace, res.status


def sup_inf(prob: Problem, grid: GridDomain | None = None, lambda_grid_size: int = 257):
    """Maximize the inner minimum over the parameter interval.

    Returns ``(value, lambda_witness)``.  A supremum that keeps growing
    across the exhaustion windows is reported as +inf.
    """
    grid = grid if grid is not None else prob.grid
    value, lam, _, status = _sup_inf_full(prob, grid, lambda_grid_size)
    if status == "diverged":
        return math.inf, float(lam) if lam is not None else math.nan
    return float(value), float(lam)


# ---------------------------------------------------------------------------
# inf over the grid of the envelope


def inf_sup(
    prob: Problem,
    grid: GridDomain | None = None,
    h: HSelector | None = None,
    lambda_grid_size: int = 257,
    extra_lambdas: tuple[float, ...] = (),
):
    """Minimize the envelope over the grid, with local refinement.

    With a selector the closed form is used; otherwise each point takes
    the grid supremum over the parameter (no golden refinement, since
    unimodality of the sections is not certified without the hypotheses).
    Returns ``(value, point)``.
    """
    grid = grid if grid is not None else prob.grid

    def phi_hat(g: GridDomain) -> np.ndarray:
        if h is not None:
            vals = closed_form_values(prob, h, g)
            for lam in extra_lambdas:
                vals = np.maximum(vals, section_values(prob, g, lam))
            return vals
        return brute_values(prob, g, lambda_grid_size, refine=False,
                            extra_lambdas=extra_lambdas)

    vals = phi_hat(grid)
    flat = int(np.argmin(vals))
    best_val = float(vals.flat[flat])
    best_point = grid.point(flat)
    spacing = grid.spacing()
    for _ in range(grid.refine_rounds):
        local = grid.refined_around(best_point, spacing)
        sub = phi_hat(local)
        sub_flat = int(np.argmin(sub))
        sub_val = float(sub.flat[sub_flat])
        if sub_val < best_val:
            best_val = sub_val
            best_point = local.point(sub_flat)
        spacing = local.spacing()
    return best_val, best_point


# ---------------------------------------------------------------------------
# The coupled report


@dataclass
class DualityReport:
    """Both sides of the estimate, the gap, and the two witnesses.

    ``truncation_trace`` records the exhaustion windows and their sup-inf
    values (a single entry for compact intervals); values are
    non-decreasing.  ``equality`` holds when the gap is below the relative
    equality tolerance.
    """

    inf_sup: float
    sup_inf: float
    gap: float
    lambda_witness: float
    x_witness: tuple[float, ...]
    equality: bool
    truncation_trace: tuple[tuple[Interval, float], ...]
    used_closed_form: bool = False
    hypotheses: HypothesisReport | None = None
    notes: str = ""


def duality_report(
    prob: Problem,
    grid: GridDomain | None = None,
    lambda_grid_size: int = 257,
    *,
    use_closed_form: bool | None = None,
    equality_tol: float | None = None,
) -> DualityReport:
    """Run both sides, couple them, and report the gap.

    ``use_closed_form=None`` decides automatically from the sampled
    hypothesis checks (the closed form needs the monotone slope ratio and
    the sign condition; sublevel connectivity only affects whether the gap
    is expected to vanish, not the pointwise envelope).
    """
    grid = grid if grid is not None else prob.grid
    eq_tol = equality_tol if equality_tol is not None else prob.tolerances.equality_rel

    h = None
    hyp = None
    if use_closed_form is None or use_closed_form:
        gp = None
        try:
            gp = build_g_profile(prob.curve)
        except (MonotonicityError, DerivativeError):
            gp = None
        if use_closed_form is None:
            hyp = check_hypotheses(prob, gp, grid)
            if gp is not None and hyp.closed_form_ok(prob.curve.domain.is_compact):
                from .envelope import make_selector

                h = make_selector(gp, hyp.sign_condition)
        elif gp is not None:
            hyp = check_hypotheses(prob, gp, grid)
            if hyp.sign_condition in ("i3", "i4"):
                from .envelope import make_selector

                h = make_selector(gp, hyp.sign_condition)

    s_value, lam_witness, trace, status = _sup_inf_full(prob, grid, lambda_grid_size)
    extra = () if status == "diverged" or lam_witness is None else (float(lam_witness),)
    v_value, x_witness = inf_sup(prob, grid, h, lambda_grid_size, extra_lambdas=extra)

    notes = []
    if status == "diverged":
        s_final = math.inf
        notes.append("sup-inf diverged across the exhaustion windows")
    else:
        # fold the inf-side witness into the inner minimum at the winning parameter
        coupled = section_at(prob, x_witness, float(lam_witness))
        s_final = min(float(s_value), coupled)
    if status == "truncated":
        notes.append("exhaustion stopped at the round cap before converging")

    slack = prob.tolerances.estimate_slack_rel * max(1.0, abs(v_value))
    if math.isfinite(s_final) and math.isfinite(v_value) and s_final > v_value + slack:
        raise ConsistencyError(
            f"one-sided estimate violated: sup_inf={s_final!r} > inf_sup={v_value!r}; "
            "this is an internal solver bug"
        )

    if math.isinf(s_final) and math.isinf(v_value):
        gap = 0.0
        notes.append("both sides diverged")
    else:
        gap = max(0.0, v_value - s_final)
    equality = gap <= eq_tol * max(1.0, abs(v_value)) if math.isfinite(gap) else False

    return DualityReport(
        inf_sup=float(v_value),
        sup_inf=float(s_final),
        gap=float(gap),
        lambda_witness=float(lam_witness) if lam_witness is not None else math.nan,
        x_witness=tuple(x_witness),
        equality=bool(equality),
        truncation_trace=trace,
        used_closed_form=h is not None,
        hypotheses=hyp,
        notes="; ".join(notes),
    )


# ---------------------------------------------------------------------------
# Equilibrium points


@dataclass
class EquilibriumResult:
    """A candidate equilibrium: freezing the parameter at the inverse ratio
    of the envelope minimizer should make that minimizer globally minimal."""

    x_tilde: tuple[float, ...]
    lambda_tilde: float
    lhs: float
    rhs: float
    residual: float
    certified: bool


def find_equilibrium(prob: Problem, grid: GridDomain | None = None,
                     h: HSelector | None = None) -> EquilibriumResult:
    """Locate the equilibrium candidate from the envelope minimizer.

    Requires psi to be nonzero on the grid.  The candidate is certified
    when the residual |lhs - rhs| is within the relative tolerance; a
    large residual usually means the sampled hypotheses fail.
    """
    grid = grid if grid is not None else prob.grid
    _, psi_vals, _ = field_values(prob, grid)
    if float(np.min(np.abs(psi_vals))) <= prob.tolerances.psi_zero:
        raise PsiZeroError("psi vanishes on the grid; the equilibrium construction needs psi != 0")

    if h is None:
        gp = build_g_profile(prob.curve)
        hyp = check_hypotheses(prob, gp, grid)
        if hyp.sign_condition not in ("i3", "i4"):
            raise ValueError("sign condition failed; no selector available for the equilibrium")
        from .envelope import make_selector

        h = make_selector(gp, hyp.sign_condition)

    phi_at_min, x_tilde = inf_sup(prob, grid, h)
    from .problem import values_at

    phi_v, psi_v, _ = values_at(prob, x_tilde)
    mu = -phi_v / psi_v
    try:
        lam_tilde = g_inverse(h.profile, mu)
    except InversionRangeError:
        lam_tilde = h_select(h, mu)  # clamped; the residual check will judge it

    lhs = section_at(prob, x_tilde, lam_tilde)
    rhs, _ = inner_inf(prob, lam_tilde, grid)
    residual = abs(lhs - rhs)
    certified = residual <= prob.tolerances.residual_rel * max(1.0, abs(lhs))
    return EquilibriumResult(
        x_tilde=tuple(x_tilde),
        lambda_tilde=float(lam_tilde),
        lhs=float(lhs),
        rhs=float(rhs),
        residual=float(residual),
        certified=bool(certified),
    )


# ---------------------------------------------------------------------------
# CSV emission


def write_lambda_curve_csv(prob: Problem, grid: GridDomain, path: str,
                           lambda_grid_size: int = 257) -> None:
    """Write (lambda, inner_inf(lambda)) over the base window of the interval."""
    dom = prob.curve.domain
    piece = dom if dom.is_compact else dom.intersect(-prob.window, prob.window)
    if piece is None:
        raise ValueError("the initial window does not intersect the parameter interval")
    lams = np.linspace(piece.lo, piece.hi, lambda_grid_size)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "inner_inf"])
        for lam in lams:
            val, _ = inner_inf(prob, float(lam), grid)
            writer.writerow([format(float(lam), ".12g"), format(val, ".12g")])


def write_envelope_csv(prob: Problem, grid: GridDomain, path: str,
                       h: HSelector | None = None, lambda_grid_size: int = 257) -> None:
    """Write per-point envelope values: coordinates, closed form (when
    available), brute force."""
    closed = closed_form_values(prob, h, grid) if h is not None else None
    brute = brute_values(prob, grid, lambda_grid_size, refine=h is not None)
    axes_names = list(prob.variables)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(axes_names + ["phi_closed", "phi_brute"])
        flat_brute = np.asarray(brute).ravel()
        flat_closed = np.asarray(closed).ravel() if closed is not None else None
        for i in range(flat_brute.size):
            point = grid.point(i)
            row = [format(v, ".12g") for v in point]
            row.append(format(float(flat_closed[i]), ".12g") if flat_closed is not None else "")
            row.append(format(float(flat_brute[i]), ".12g"))
            writer.writerow(row)

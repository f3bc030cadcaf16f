"""Built-in families with analytic envelopes and dual values.

Each entry carries its parameter curve, the closed-form envelope it
guarantees, optional closed-form dual value, and the validity constraints
under which those formulas hold.  Checkers refuse to assert analytic
values outside the recorded constraints instead of silently fabricating
oracle failures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .expr import parse
from .family import Interval, ParamCurve
from .problem import GridDomain, Problem, field_values

__all__ = [
    "CatalogEntry",
    "LipschitzReport",
    "trig_family",
    "prop11_family",
    "exp_family",
    "lipschitz_family",
    "lipschitz_criterion",
    "entry_names",
    "get_entry",
]

_HALF_PI = math.pi / 2.0
_PROP11_MIN_C = 1.0 + math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """A named family with its analytic oracles.

    ``analytic_envelope(phi, psi, omega)`` evaluates the closed-form
    envelope from field values (scalars or arrays).  ``analytic_dual``
    reduces the dual value in closed form on a sampled problem, or is
    None.  ``check(prob, grid)`` returns constraint violations (empty
    means the analytic formulas apply).
    """

    name: str
    curve: ParamCurve
    constraints: tuple[str, ...]
    params: tuple[tuple[str, float], ...]
    analytic_envelope: Callable
    analytic_dual: Callable | None = None
    checker: Callable | None = None
    tail_divergence: str | None = None  # direction of the sections at an unbounded end

    def check(self, prob: Problem, grid: GridDomain | None = None) -> list[str]:
        if self.checker is None:
            return []
        return self.checker(prob, grid if grid is not None else prob.grid)

    def config_snippet(self) -> str:
        lines = ["[family]", f"kind = {self.name}"]
        for key, value in self.params:
            lines.append(f"{key} = {value!r}")
        return "\n".join(lines)


def _trig_curve(c: float, d: float, j: Interval) -> ParamCurve:
    return ParamCurve(
        alpha=parse(f"sin(lambda) + ({c!r})"),
        beta=parse(f"cos(lambda) + ({d!r})"),
        domain=j,
        alpha_prime=parse("cos(lambda)"),
        beta_prime=parse("-sin(lambda)"),
    )


def _tan_range(j: Interval) -> tuple[float, float]:
    lo = -math.inf if j.lo <= -_HALF_PI else math.tan(j.lo)
    hi = math.inf if j.hi >= _HALF_PI else math.tan(j.hi)
    return lo, hi


def trig_family(c: float, d: float, j: Interval | None = None) -> CatalogEntry:
    """Sine/cosine coefficient curve on a sub-interval of [-pi/2, pi/2].

    Envelope: c*phi + d*psi + sqrt(phi^2 + psi^2) + omega, valid when
    psi >= 0 with the full interval, or when psi > 0 and phi/psi stays in
    the tangent range of the interval interior.  On psi = 0 the formula
    reduces exactly to max((c+1)*phi, (c-1)*phi) + omega.
    """
    j = j if j is not None else Interval(-_HALF_PI, _HALF_PI)
    tol = 1e-12
    if j.lo < -_HALF_PI - tol or j.hi > _HALF_PI + tol:
        raise ValueError(f"trig interval {j} must lie within [-pi/2, pi/2]")

    def envelope(phi, psi, omega):
        return c * phi + d * psi + np.sqrt(phi * phi + psi * psi) + omega

    def dual(prob: Problem, grid: GridDomain):
        phi, psi, om = field_values(prob, grid)
        return float(np.min(envelope(phi, psi, om)))

    full = j.lo <= -_HALF_PI + tol and j.hi >= _HALF_PI - tol

    def checker(prob: Problem, grid: GridDomain) -> list[str]:
        phi, psi, _ = field_values(prob, grid)
        out = []
        psi_tol = prob.tolerances.psi_zero
        if full:
            if float(np.min(psi)) < -psi_tol:
                out.append("psi must be non-negative for the full-interval envelope")
            return out
        if float(np.min(psi)) <= psi_tol:
            out.append("psi must be strictly positive on a restricted interval")
            return out
        lo_t, hi_t = _tan_range(j.interior())
        ratio = phi / psi
        if float(np.min(ratio)) <= lo_t or float(np.max(ratio)) >= hi_t:
            out.append(
                "phi/psi must stay inside the tangent range of the interval interior"
            )
        return out

    return CatalogEntry(
        name="trig",
        curve=_trig_curve(c, d, j),
        constraints=(
            "psi >= 0 when the interval is the full [-pi/2, pi/2]",
            "psi > 0 and phi/psi inside tan(interior) on a restricted interval",
        ),
        params=(("c", float(c)), ("d", float(d)), ("j_lo", j.lo), ("j_hi", j.hi)),
        analytic_envelope=envelope,
        analytic_dual=dual,
        checker=checker,
    )


def prop11_family(c: float) -> CatalogEntry:
    """Trig curve with the offset pair (c, c - sqrt(2)).

    For c >= 1 + sqrt(2), a linear phi and a non-negative psi whose
    Lipschitz constant equals the norm of phi, the dual value reduces to
    (c - 1/sqrt(2)) * inf(phi + psi).  The Lipschitz/linearity metadata is
    user-asserted; the checker only samples it heuristically.
    """
    if c < _PROP11_MIN_C - 1e-12:
        raise ValueError(f"c must be at least 1 + sqrt(2) ~= {_PROP11_MIN_C:.6f}")
    d = c - math.sqrt(2.0)
    base = trig_family(c, d)

    def dual(prob: Problem, grid: GridDomain):
        phi, psi, _ = field_values(prob, grid)
        return (c - 1.0 / math.sqrt(2.0)) * float(np.min(phi + psi))

    def checker(prob: Problem, grid: GridDomain) -> list[str]:
        phi, psi, _ = field_values(prob, grid)
        out = []
        if float(np.min(psi)) < -prob.tolerances.psi_zero:
            out.append("psi must be non-negative")
        # heuristic two-point sampling of the Lipschitz/linearity assertion
        rng = np.random.default_rng(7)
        axes = grid.axes()
        flat_phi, flat_psi = np.asarray(phi).ravel(), np.asarray(psi).ravel()
        n = flat_phi.size
        idx_a = rng.integers(0, n, size=min(512, n * 2))
        idx_b = rng.integers(0, n, size=idx_a.size)
        pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(n, -1)
        dist = np.linalg.norm(pts[idx_a] - pts[idx_b], axis=1)
        keep = dist > 0
        if np.any(keep):
            slope_psi = np.abs(flat_psi[idx_a] - flat_psi[idx_b])[keep] / dist[keep]
            slope_phi = np.abs(flat_phi[idx_a] - flat_phi[idx_b])[keep] / dist[keep]
            phi_norm_est = float(np.max(slope_phi)) if slope_phi.size else 0.0
            if phi_norm_est > 0 and float(np.max(slope_psi)) > phi_norm_est * (1 + 1e-6) + 1e-9:
                out.append(
                    "sampled psi slope exceeds the sampled norm of phi "
                    "(heuristic check of the asserted Lipschitz constant)"
                )
        return out

    return CatalogEntry(
        name="prop11",
        curve=base.curve,
        constraints=(
            "c >= 1 + sqrt(2)",
            "phi linear; psi non-negative with Lipschitz constant equal to the norm of phi "
            "(user-asserted; sampled heuristically)",
        ),
        params=(("c", float(c)),),
        analytic_envelope=base.analytic_envelope,
        analytic_dual=dual,
        checker=checker,
    )


def exp_family(i: Interval) -> CatalogEntry:
    """Exponential coefficient curve alpha = e^lam, beta = (1 - lam) e^lam.

    The slope ratio is -lam with derivatives everywhere, so the derivative
    set is the whole (closed) interval.  Envelope: e^(phi/psi) * psi +
    omega, valid when psi > 0 and phi/psi stays inside the interval.  On
    an unbounded upper end the sections fall to -inf, so the exhaustion
    schedule terminates.
    """
    curve = ParamCurve(
        alpha=parse("exp(lambda)"),
        beta=parse("(1 - lambda)*exp(lambda)"),
        domain=i,
        alpha_prime=parse("exp(lambda)"),
        beta_prime=parse("-lambda*exp(lambda)"),
        deriv_domain=i,
    )

    def envelope(phi, psi, omega):
        return np.exp(phi / psi) * psi + omega

    def dual(prob: Problem, grid: GridDomain):
        phi, psi, om = field_values(prob, grid)
        return float(np.min(envelope(phi, psi, om)))

    def checker(prob: Problem, grid: GridDomain) -> list[str]:
        phi, psi, _ = field_values(prob, grid)
        out = []
        if float(np.min(psi)) <= prob.tolerances.psi_zero:
            out.append("psi must be strictly positive")
            return out
        ratio = phi / psi
        tol = 1e-9
        lo_ok = i.lo == -math.inf or float(np.min(ratio)) >= i.lo - tol
        hi_ok = i.hi == math.inf or float(np.max(ratio)) <= i.hi + tol
        if not (lo_ok and hi_ok):
            out.append("the interval must contain the sampled range of phi/psi")
        return out

    return CatalogEntry(
        name="exp",
        curve=curve,
        constraints=(
            "psi > 0 on the grid",
            "the interval contains [inf phi/psi, sup phi/psi]",
        ),
        params=(("i_lo", i.lo), ("i_hi", i.hi)),
        analytic_envelope=envelope,
        analytic_dual=dual,
        checker=checker,
        tail_divergence="sections tend to -inf as lambda -> +inf",
    )


def lipschitz_family(c: float = _PROP11_MIN_C, lipschitz_constant: float = 1.0,
                     phi_norm: float = 1.0) -> CatalogEntry:
    """The linear-phi / Lipschitz-psi setting packaged as an entry.

    Uses the offset trig curve of :func:`prop11_family`; the dual reduces
    to the supremum over parameters outside the dominance set D = { lam :
    |beta(lam)| L < |alpha(lam)| * phi_norm } (inner minima for lam in D
    are unbounded below on an unbounded domain).  Requires omega = 0.
    """
    base = prop11_family(c)

    def dual(prob: Problem, grid: GridDomain):
        report = lipschitz_criterion(prob, lipschitz_constant, phi_norm)
        return report.reduced_dual

    def checker(prob: Problem, grid: GridDomain) -> list[str]:
        out = base.check(prob, grid)
        _, _, om = field_values(prob, grid)
        if float(np.max(np.abs(om))) > 0:
            out.append("omega must be identically zero for this entry")
        return out

    return CatalogEntry(
        name="lipschitz",
        curve=base.curve,
        constraints=base.constraints + ("omega = 0",),
        params=(
            ("c", float(c)),
            ("lipschitz_constant", float(lipschitz_constant)),
            ("phi_norm", float(phi_norm)),
        ),
        analytic_envelope=base.analytic_envelope,
        analytic_dual=dual,
        checker=checker,
    )


@dataclass
class LipschitzReport:
    """Membership of sampled parameters in the dominance set D, the reduced
    dual value over the complement, and window-expansion spot checks."""

    lambdas: np.ndarray = field(repr=False)
    in_d: np.ndarray = field(repr=False)
    d_fraction: float = 0.0
    reduced_dual: float | None = None
    reduced_witness: float | None = None
    spot_checks: tuple[tuple[float, bool, tuple[float, ...]], ...] = ()


def lipschitz_criterion(prob: Problem, lipschitz_constant: float, phi_norm: float,
                        lambda_samples: int = 129, *, spot_check_count: int = 3,
                        expansion_rounds: int = 4) -> LipschitzReport:
    """Flag sampled parameters in D = { |beta| L < |alpha| phi_norm }.

    For parameters in D the inner minimum is expected to be unbounded
    below when the domain box truncates an unbounded space; this is spot
    checked by doubling the box and watching the inner minimum fall.
    The reduced dual value maximizes the inner minimum over the sampled
    complement of D only.
    """
    from .duality import inner_inf

    dom = prob.curve.domain
    lo = max(dom.lo, -64.0)
    hi = min(dom.hi, 64.0)
    lams = np.linspace(lo, hi, lambda_samples)
    alpha = np.asarray(prob.curve.alpha_at(lams), dtype=float)
    beta = np.asarray(prob.curve.beta_at(lams), dtype=float)
    in_d = np.abs(beta) * lipschitz_constant < np.abs(alpha) * phi_norm

    reduced_dual = None
    reduced_witness = None
    outside = np.flatnonzero(~in_d)
    if outside.size:
        vals = [inner_inf(prob, float(lams[i]))[0] for i in outside]
        k = int(np.argmax(vals))
        reduced_dual = float(vals[k])
        reduced_witness = float(lams[outside[k]])

    spots = []
    flagged = np.flatnonzero(in_d)
    if flagged.size and spot_check_count > 0:
        take = np.linspace(0, flagged.size - 1, min(spot_check_count, flagged.size)).astype(int)
        for i in flagged[take]:
            lam = float(lams[i])
            values = []
            grid = prob.grid
            centers = tuple((a + b) / 2.0 for a, b in zip(grid.lo, grid.hi))
            halves = tuple((b - a) / 2.0 for a, b in zip(grid.lo, grid.hi))
            for k in range(expansion_rounds + 1):
                scale = 2.0**k
                box = GridDomain(
                    tuple(c - hw * scale for c, hw in zip(centers, halves)),
                    tuple(c + hw * scale for c, hw in zip(centers, halves)),
                    grid.resolution,
                    0,
                )
                values.append(inner_inf(prob, lam, box)[0])
            drops = all(b < a for a, b in zip(values, values[1:]))
            confirmed = drops and values[-1] <= values[0] - max(1.0, abs(values[0]))
            spots.append((lam, bool(confirmed), tuple(values)))

    return LipschitzReport(
        lambdas=lams,
        in_d=in_d,
        d_fraction=float(np.mean(in_d)),
        reduced_dual=reduced_dual,
        reduced_witness=reduced_witness,
        spot_checks=tuple(spots),
    )


# ---------------------------------------------------------------------------
# Listing

_BUILDERS = {
    "trig": lambda: trig_family(0.0, 0.0),
    "prop11": lambda: prop11_family(_PROP11_MIN_C),
    "exp": lambda: exp_family(Interval(0.0, 1.0)),
    "lipschitz": lambda: lipschitz_family(),
}


def entry_names() -> tuple[str, ...]:
    return tuple(_BUILDERS)


def get_entry(name: str) -> CatalogEntry:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown catalog entry '{name}'") from None

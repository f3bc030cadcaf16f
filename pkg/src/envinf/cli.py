"""Command-line interface: hypothesis checks, envelopes, duality, topology.

Commands::

    envinf check <config> [--lambda-grid N] [--refine R] [--tol T]
    envinf envelope <config> [--csv PATH] ...
    envinf duality <config> [--csv PATH] ...
    envinf equilibrium <config> ...
    envinf alternative <config> ...
    envinf catalog-list

Exit status: 0 on success, 2 when ``check`` finds a failed hypothesis,
1 on any error.  Reports are deterministic: identical config and flags
produce identical text.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import catalog as _catalog
from . import duality as _duality
from . import envelope as _envelope
from . import topology as _topology
from .config import ConfigError, ProblemConfig, load_config
from .expr import ExpressionError
from .family import (
    DerivativeError,
    FamilyError,
    MonotonicityError,
    build_g_profile,
    check_hypotheses,
)
from .problem import GridDomain, Problem

COMMANDS = ("check", "envelope", "duality", "equilibrium", "alternative", "catalog-list")


def _fmt(value: float, places: int = 4) -> str:
    return f"{value:.{places}f}"


def _fmt_point(point) -> str:
    return "(" + ", ".join(format(v, ".6f") for v in point) + ")"


def _apply_flags(cfg: ProblemConfig, args) -> ProblemConfig:
    prob = cfg.problem
    if args.refine is not None:
        grid = GridDomain(prob.grid.lo, prob.grid.hi, prob.grid.resolution, args.refine)
        prob = replace(prob, grid=grid)
    if args.tol is not None:
        prob = replace(prob, tolerances=replace(prob.tolerances, equality_rel=args.tol,
                                                residual_rel=args.tol))
    lambda_grid = args.lambda_grid if args.lambda_grid is not None else cfg.lambda_grid
    return replace(cfg, problem=prob, lambda_grid=lambda_grid)


def _selector(prob: Problem):
    """Profile + selector when the sign condition holds; report alongside."""
    gp = None
    try:
        gp = build_g_profile(prob.curve)
    except (MonotonicityError, DerivativeError):
        pass
    report = check_hypotheses(prob, gp, prob.grid)
    h = None
    if gp is not None and report.sign_condition in ("i3", "i4"):
        h = _envelope.make_selector(gp, report.sign_condition)
    return gp, report, h


def run_check(cfg: ProblemConfig) -> tuple[int, str]:
    prob = cfg.problem
    _, report, _ = _selector(prob)
    lines = []
    if cfg.entry is not None:
        violations = cfg.entry.check(prob)
        for v in violations:
            lines.append(f"entry_constraint=violated: {v}")
        if not violations:
            lines.append("entry_constraint=ok")
    lines.append(f"i2_monotone={'pass' if report.i2_monotone else 'fail'}")
    lines.append(f"sign_condition={report.sign_condition}")
    lines.append(f"range_condition_i2prime={'pass' if report.range_condition_i2prime else 'fail'}")
    for lam, status in report.i1_grid_connected:
        lines.append(f"i1_grid_connected lambda={format(lam, '.6f')} {status}")
    compact = prob.curve.domain.is_compact
    holds = report.holds_compact if compact else report.holds_general
    lines.append(f"hypotheses={'pass' if holds else 'fail'}")
    lines.append(f"notes={report.notes}")
    return (0 if holds else 2), "\n".join(lines)


def run_envelope(cfg: ProblemConfig, csv_path: str | None) -> tuple[int, str]:
    prob = cfg.problem
    _, report, h = _selector(prob)
    closed = _envelope.closed_form_values(prob, h) if h is not None else None
    brute = _envelope.brute_values(prob, lambda_grid_size=cfg.lambda_grid, refine=h is not None)
    lines = [f"points={brute.size}"]
    if closed is not None:
        diff = np.abs(closed - brute)
        denom = np.maximum(1.0, np.abs(brute))
        lines.append(f"closed_form=used sign_condition={report.sign_condition}")
        lines.append(f"max_abs_diff={np.max(diff):.3e}")
        lines.append(f"max_rel_diff={np.max(diff / denom):.3e}")
    else:
        lines.append("closed_form=unavailable (hypotheses failed); brute force only")
    lines.append(f"min_phi={_fmt(float(np.min(brute)))}")
    lines.append(f"max_phi={_fmt(float(np.max(brute)))}")
    if csv_path:
        _duality.write_envelope_csv(prob, prob.grid, csv_path, h, cfg.lambda_grid)
        lines.append(f"csv={csv_path}")
    return 0, "\n".join(lines)


def run_duality(cfg: ProblemConfig, csv_path: str | None) -> tuple[int, str]:
    prob = cfg.problem
    report = _duality.duality_report(prob, lambda_grid_size=cfg.lambda_grid)
    lines = [
        f"inf_sup={_fmt(report.inf_sup)}",
        f"sup_inf={_fmt(report.sup_inf)}",
        f"gap={_fmt(report.gap)}",
        f"equality={'true' if report.equality else 'false'}",
        f"lambda_witness={format(report.lambda_witness, '.6f')}",
        f"x_witness={_fmt_point(report.x_witness)}",
        f"closed_form={'used' if report.used_closed_form else 'brute'}",
    ]
    if len(report.truncation_trace) > 1:
        for piece, value in report.truncation_trace:
            lines.append(f"trace {piece} sup_inf={format(value, '.9f')}")
    if csv_path:
        _duality.write_lambda_curve_csv(prob, prob.grid, csv_path, cfg.lambda_grid)
        lines.append(f"csv={csv_path}")
    return 0, "\n".join(lines)


def run_equilibrium(cfg: ProblemConfig) -> tuple[int, str]:
    prob = cfg.problem
    _, _, h = _selector(prob)
    result = _duality.find_equilibrium(prob, h=h)
    lines = [
        f"x_tilde={_fmt_point(result.x_tilde)}",
        f"lambda_tilde={format(result.lambda_tilde, '.9f')}",
        f"lhs={format(result.lhs, '.9f')}",
        f"rhs={format(result.rhs, '.9f')}",
        f"residual={result.residual:.3e}",
        f"certified={'true' if result.certified else 'false'}",
    ]
    return 0, "\n".join(lines)


def run_alternative(cfg: ProblemConfig) -> tuple[int, str]:
    prob = cfg.problem
    _, _, h = _selector(prob)
    if h is None:
        raise FamilyError("the alternative needs a monotone slope ratio with a sign condition")
    report = _topology.alternative_check(prob, prob.grid, h)
    lines = [f"outcome={report.outcome}"]
    if report.equilibrium is not None:
        lines.append(f"equilibrium_residual={report.equilibrium.residual:.3e}")
    if report.run_interval is not None:
        lo, hi = report.run_interval
        lines.append(f"two_well_run=[{format(lo, '.6f')}, {format(hi, '.6f')}]")
    lines.append(f"details={report.details}")
    return 0, "\n".join(lines)


def run_catalog_list() -> tuple[int, str]:
    lines = []
    for name in _catalog.entry_names():
        entry = _catalog.get_entry(name)
        lines.append(f"{name}: constraints: {'; '.join(entry.constraints)}")
        lines.append(entry.config_snippet())
        lines.append("")
    return 0, "\n".join(lines).rstrip()


def run(command: str, cfg: ProblemConfig | None, csv_path: str | None = None) -> tuple[int, str]:
    if command == "catalog-list":
        return run_catalog_list()
    if cfg is None:
        raise ConfigError("a config path is required")
    if command == "check":
        return run_check(cfg)
    if command == "envelope":
        return run_envelope(cfg, csv_path)
    if command == "duality":
        return run_duality(cfg, csv_path)
    if command == "equilibrium":
        return run_equilibrium(cfg)
    if command == "alternative":
        return run_alternative(cfg)
    raise ConfigError(f"unknown command '{command}'")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="envinf",
        description="infimum of upper envelopes of two-parameter affine families",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name != "catalog-list":
            p.add_argument("config", help="problem config file")
        else:
            p.add_argument("config", nargs="?", default=None)
        p.add_argument("--lambda-grid", type=int, default=None,
                       help="parameter grid size (default from config, 257)")
        p.add_argument("--refine", type=int, default=None,
                       help="override grid refinement rounds")
        p.add_argument("--tol", type=float, default=None,
                       help="override the relative equality/residual tolerance")
        p.add_argument("--csv", default=None, help="write a CSV next to the report")
    args = parser.parse_args(argv)

    try:
        cfg = None
        if args.config is not None:
            cfg = _apply_flags(load_config(args.config), args)
        code, text = run(args.command, cfg, args.csv)
    except (ConfigError, ExpressionError, FamilyError, _duality.PsiZeroError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Problem ingestion from flat sectioned key-value config files.

The format is INI-style (see docs/config.md for the full grammar):
``[variables]`` declares the axes, ``[functions]`` the field expressions,
``[family]`` either a custom coefficient curve or a catalog entry, with
optional ``[options]``, ``[tolerances]`` and ``[output]`` sections.
Scalar values accept arithmetic (``pi/2``, ``1 + sqrt(2)``) and the
words ``inf``/``-inf`` for interval ends.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field

from . import catalog as _catalog
from .expr import ExpressionError, parse
from .family import Interval, ParamCurve
from .problem import GridDomain, Problem, Tolerances

__all__ = ["ConfigError", "ProblemConfig", "load_config", "load_problem"]


class ConfigError(ValueError):
    pass


@dataclass
class ProblemConfig:
    """Parsed config: the problem plus run options and output paths."""

    problem: Problem
    entry: "_catalog.CatalogEntry | None" = None
    lambda_grid: int = 257
    lambda_csv: str | None = None
    envelope_csv: str | None = None
    path: str = ""
    raw: dict = field(default_factory=dict, repr=False)


def _scalar(text: str, where: str) -> float:
    text = text.strip()
    lowered = text.lower()
    if lowered in ("inf", "+inf"):
        return math.inf
    if lowered == "-inf":
        return -math.inf
    try:
        e = parse(text, variables=())
        from .expr import evaluate

        return float(evaluate(e, {}))
    except ExpressionError as exc:
        raise ConfigError(f"invalid numeric value for {where}: {exc}") from None


def _scalar_list(text: str, where: str, count: int | None = None) -> list[float]:
    parts = [p for p in text.split(",") if p.strip()]
    values = [_scalar(p, where) for p in parts]
    if count is not None and len(values) != count:
        raise ConfigError(f"{where} expects {count} comma-separated values, got {len(values)}")
    return values


def _interval(text: str, where: str) -> Interval:
    lo, hi = _scalar_list(text, where, 2)
    try:
        return Interval(lo, hi)
    except ValueError as exc:
        raise ConfigError(f"invalid interval for {where}: {exc}") from None


def _require(section, key: str, section_name: str) -> str:
    if key not in section:
        raise ConfigError(f"missing key '{key}' in [{section_name}]")
    return section[key]


def load_config(path: str) -> ProblemConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    try:
        read = cp.read(path)
    except configparser.ParsingError as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    if not read:
        raise ConfigError(f"cannot read config file '{path}'")

    for required in ("variables", "functions", "family"):
        if required not in cp:
            raise ConfigError(f"missing section [{required}]")

    # axes
    names, los, his, ress = [], [], [], []
    for name, value in cp["variables"].items():
        lo, hi, res = _scalar_list(value, f"[variables] {name}", 3)
        names.append(name)
        los.append(lo)
        his.append(hi)
        ress.append(int(res))
    if not names:
        raise ConfigError("at least one variable is required in [variables]")

    options = cp["options"] if "options" in cp else {}
    refine = int(_scalar(options.get("refine_rounds", "2"), "[options] refine_rounds"))
    lambda_grid = int(_scalar(options.get("lambda_grid", "257"), "[options] lambda_grid"))
    window = _scalar(options.get("window", "1.0"), "[options] window")

    try:
        grid = GridDomain(tuple(los), tuple(his), tuple(ress), refine)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    # fields
    fns = cp["functions"]
    def _expr(key: str, required: bool = True, default: str = "0"):
        text = _require(fns, key, "functions") if required else fns.get(key, default)
        try:
            return parse(text, variables=names)
        except ExpressionError as exc:
            raise ConfigError(f"invalid expression for '{key}': {exc}") from None

    phi = _expr("phi")
    psi = _expr("psi")
    omega = _expr("omega", required=False)

    # tolerances
    tols = cp["tolerances"] if "tolerances" in cp else {}
    tolerances = Tolerances(
        psi_zero=_scalar(tols.get("psi_zero", "1e-9"), "[tolerances] psi_zero"),
        equality_rel=_scalar(tols.get("equality", "1e-4"), "[tolerances] equality"),
        residual_rel=_scalar(tols.get("residual", "1e-4"), "[tolerances] residual"),
        estimate_slack_rel=_scalar(tols.get("estimate_slack", "1e-7"),
                                   "[tolerances] estimate_slack"),
        exhaustion_stop=_scalar(tols.get("exhaustion_stop", "1e-9"),
                                "[tolerances] exhaustion_stop"),
    )

    # family
    fam = cp["family"]
    kind = _require(fam, "kind", "family").strip().lower()
    entry = None
    if kind == "custom":
        def _lambda_expr(key: str, required: bool):
            if not required and key not in fam:
                return None
            text = _require(fam, key, "family")
            try:
                return parse(text, variables=("lambda",))
            except ExpressionError as exc:
                raise ConfigError(f"invalid expression for '{key}': {exc}") from None

        interval = _interval(_require(fam, "interval", "family"), "[family] interval")
        deriv = None
        if "deriv_interval" in fam:
            deriv = _interval(fam["deriv_interval"], "[family] deriv_interval")
        try:
            curve = ParamCurve(
                alpha=_lambda_expr("alpha", True),
                beta=_lambda_expr("beta", True),
                domain=interval,
                alpha_prime=_lambda_expr("alpha_prime", False),
                beta_prime=_lambda_expr("beta_prime", False),
                deriv_domain=deriv,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    elif kind in _catalog.entry_names():
        try:
            if kind == "trig":
                c = _scalar(fam.get("c", "0"), "[family] c")
                d = _scalar(fam.get("d", "0"), "[family] d")
                j = _interval(fam["interval"], "[family] interval") if "interval" in fam else None
                entry = _catalog.trig_family(c, d, j)
            elif kind == "prop11":
                c = _scalar(_require(fam, "c", "family"), "[family] c")
                entry = _catalog.prop11_family(c)
            elif kind == "exp":
                i = _interval(_require(fam, "interval", "family"), "[family] interval")
                entry = _catalog.exp_family(i)
            else:  # lipschitz
                c = _scalar(fam.get("c", repr(1.0 + math.sqrt(2.0))), "[family] c")
                lip = _scalar(fam.get("lipschitz_constant", "1"),
                              "[family] lipschitz_constant")
                norm = _scalar(fam.get("phi_norm", "1"), "[family] phi_norm")
                entry = _catalog.lipschitz_family(c, lip, norm)
        except ValueError as exc:
            raise ConfigError(f"catalog precondition violated: {exc}") from None
        curve = entry.curve
    else:
        raise ConfigError(
            f"unknown family kind '{kind}'; expected custom or one of {_catalog.entry_names()}"
        )

    try:
        problem = Problem(
            variables=tuple(names),
            phi=phi,
            psi=psi,
            omega=omega,
            curve=curve,
            grid=grid,
            tolerances=tolerances,
            window=window,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    output = cp["output"] if "output" in cp else {}
    return ProblemConfig(
        problem=problem,
        entry=entry,
        lambda_grid=lambda_grid,
        lambda_csv=output.get("lambda_csv"),
        envelope_csv=output.get("envelope_csv"),
        path=str(path),
    )


def load_problem(path: str) -> Problem:
    """Load and fully validate a problem; hypothesis checks are not run here."""
    return load_config(path).problem

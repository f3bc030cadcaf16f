"""envinf: infimum of the upper envelope of two-parameter affine families.

The envelope of the family ``alpha(lam)*phi + beta(lam)*psi + omega`` over
a parameter interval is evaluated two independent ways (closed form via
the inverted slope ratio, and brute force), both sides of the one-sided
minimax estimate are computed and coupled, duality gaps are detected, and
equilibrium points are located and certified.  Sampled hypothesis checks
say when the closed form and the minimax equality are trustworthy.
"""

from .catalog import (
    CatalogEntry,
    LipschitzReport,
    entry_names,
    exp_family,
    get_entry,
    lipschitz_criterion,
    lipschitz_family,
    prop11_family,
    trig_family,
)
from .config import ConfigError, ProblemConfig, load_config, load_problem
from .duality import (
    ConsistencyError,
    DualityReport,
    EquilibriumResult,
    PsiZeroError,
    duality_report,
    find_equilibrium,
    inf_sup,
    inner_inf,
    sup_inf,
    write_envelope_csv,
    write_lambda_curve_csv,
)
from .envelope import (
    EnvelopeValue,
    HSelector,
    brute_values,
    closed_form_values,
    envelope_brute,
    envelope_closed_form,
    h_select,
    make_selector,
)
from .expr import (
    EvaluationError,
    Expression,
    ExpressionError,
    ParseError,
    evaluate,
    parse,
    to_string,
)
from .family import (
    DerivativeError,
    FamilyError,
    GProfile,
    HypothesisReport,
    Interval,
    InversionRangeError,
    MonotonicityError,
    ParamCurve,
    build_g_profile,
    check_hypotheses,
    g_inverse,
    g_value,
)
from .problem import GridDomain, Problem, Tolerances, field_values, section_values
from .topology import (
    AlternativeReport,
    LocalMinimaReport,
    SublevelAnalysis,
    alternative_check,
    inf_connected_check,
    local_minima,
    sublevel_components,
    write_labels_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AlternativeReport",
    "CatalogEntry",
    "ConfigError",
    "ConsistencyError",
    "DerivativeError",
    "DualityReport",
    "EnvelopeValue",
    "EquilibriumResult",
    "EvaluationError",
    "Expression",
    "ExpressionError",
    "FamilyError",
    "GProfile",
    "GridDomain",
    "HSelector",
    "HypothesisReport",
    "Interval",
    "InversionRangeError",
    "LipschitzReport",
    "LocalMinimaReport",
    "MonotonicityError",
    "ParamCurve",
    "ParseError",
    "Problem",
    "ProblemConfig",
    "PsiZeroError",
    "SublevelAnalysis",
    "Tolerances",
    "alternative_check",
    "brute_values",
    "build_g_profile",
    "check_hypotheses",
    "closed_form_values",
    "duality_report",
    "entry_names",
    "envelope_brute",
    "envelope_closed_form",
    "evaluate",
    "exp_family",
    "field_values",
    "find_equilibrium",
    "g_inverse",
    "g_value",
    "get_entry",
    "h_select",
    "inf_connected_check",
    "inf_sup",
    "inner_inf",
    "lipschitz_criterion",
    "lipschitz_family",
    "load_config",
    "load_problem",
    "local_minima",
    "make_selector",
    "parse",
    "prop11_family",
    "section_values",
    "sublevel_components",
    "sup_inf",
    "to_string",
    "trig_family",
    "write_envelope_csv",
    "write_labels_csv",
    "write_lambda_curve_csv",
]

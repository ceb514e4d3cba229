"""Alpha-level fuzzy numbers, Hukuhara-type differences and H/gH-derivatives."""
from .analyzer import DiffReport, ScanRequest, level_curves_csv, run_fixtures, scan
from .calculus import (DEFAULT_PARAMS, DerivativeResult, GradientResult, LimitParams,
                       classify_h, gh_derivative_numeric, h_derivative_numeric,
                       h_derivative_symbolic, h_differentiable, higher_h_derivative,
                       level_derivative_check, partial_h_derivative, second_partial_existence)
from .funcspec import FuzzyExpr, ParseError, eval_fuzzy, parse, parse_literal
from .fuzzy import (EPS_VALID, AlphaGrid, ExistenceCertificate, FuzzyError, FuzzyNumber,
                    Interval, add, alpha_cut, dF, gh_diff, h_diff, hausdorff, make_crisp,
                    make_trapezoidal, make_triangular, membership, scalar_mul, standard_diff, zero)

__version__ = "0.1.0"

__all__ = [
    "AlphaGrid", "DEFAULT_PARAMS", "DerivativeResult", "DiffReport", "EPS_VALID",
    "ExistenceCertificate", "FuzzyError", "FuzzyExpr", "FuzzyNumber", "GradientResult",
    "Interval", "LimitParams", "ParseError", "ScanRequest", "add", "alpha_cut", "classify_h",
    "dF", "eval_fuzzy", "gh_derivative_numeric", "gh_diff", "h_derivative_numeric",
    "h_derivative_symbolic", "h_diff", "h_differentiable", "hausdorff", "higher_h_derivative",
    "level_curves_csv", "level_derivative_check", "make_crisp", "make_trapezoidal",
    "make_triangular", "membership", "parse", "parse_literal", "partial_h_derivative",
    "run_fixtures", "scalar_mul", "scan", "second_partial_existence", "standard_diff", "zero",
]

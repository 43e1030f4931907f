"""Exact satisfiability solving for conjunctions of bend constraints over Q."""

from .certify import (
    Certificate,
    brute_force_sat,
    check_refutation,
    check_witness,
    find_handcuff_refutation,
    format_certificate,
)
from .core import (
    Assignment,
    Bend,
    BijunctiveFormula,
    Bound,
    Lit,
    Rel,
    TvpiIneq,
    bound_implies,
    bounds_conflict,
    eval_bend,
    lit,
    median3,
    normalize_bend,
    strongest_bound,
)
from .eliminate import SolveResult, solve
from .errors import BendsatError, ParseError
from .frontend import parse, parse_file, pretty_print, run_cli
from .propagate import propagate
from .rationals import NEG_INF, POS_INF, ExtendedRational, Rational, ext, rat

__all__ = [
    "Assignment",
    "Bend",
    "BendsatError",
    "BijunctiveFormula",
    "Bound",
    "Certificate",
    "ExtendedRational",
    "Lit",
    "NEG_INF",
    "POS_INF",
    "ParseError",
    "Rational",
    "Rel",
    "SolveResult",
    "TvpiIneq",
    "bound_implies",
    "bounds_conflict",
    "brute_force_sat",
    "check_refutation",
    "check_witness",
    "eval_bend",
    "ext",
    "find_handcuff_refutation",
    "format_certificate",
    "lit",
    "median3",
    "normalize_bend",
    "parse",
    "parse_file",
    "pretty_print",
    "propagate",
    "rat",
    "run_cli",
    "solve",
    "strongest_bound",
]

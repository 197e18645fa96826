"""Open closure types: a lambda calculus whose function types record the
context they capture, annotated with which variables each value depends on."""
from .analysis import (
    AtomDomain,
    NonInterferenceReport,
    check_noninterference,
    gen_typed_term,
    phi_equiv_valuations,
    semantic_deps_oracle,
    value_equiv,
)
from .errors import (
    BudgetExceeded,
    CalculusError,
    EscapeError,
    IllScoped,
    InvariantViolation,
    NotPrefix,
    ParseError,
    TypeMismatch,
    ValueTypeMismatch,
)
from .evaluate import eval_classic, eval_open, values_equiv_semantics
from .infer import check_derivation, infer, infer_type
from .parser import parse, parse_context, parse_term, parse_type
from .printer import print_annotated_context, print_term, print_type, print_value, render_derivation
from .runtime import AtomConst, Closure, VPair, check_valuation, check_value, subst_value
from .scope import check_context, check_type
from .subst import subst_annotated, subst_type
from .syntax import App, Atom, Clos, Fix, Lam, Let, Pair, Prod, Proj, Var

__all__ = [
    "App",
    "Atom",
    "AtomConst",
    "AtomDomain",
    "BudgetExceeded",
    "CalculusError",
    "Clos",
    "Closure",
    "EscapeError",
    "Fix",
    "IllScoped",
    "InvariantViolation",
    "Lam",
    "Let",
    "NonInterferenceReport",
    "NotPrefix",
    "Pair",
    "ParseError",
    "Prod",
    "Proj",
    "TypeMismatch",
    "VPair",
    "ValueTypeMismatch",
    "Var",
    "check_context",
    "check_derivation",
    "check_noninterference",
    "check_type",
    "check_valuation",
    "check_value",
    "derivation",
    "eval_classic",
    "eval_open",
    "gen_typed_term",
    "infer",
    "infer_type",
    "parse",
    "parse_context",
    "parse_term",
    "parse_type",
    "phi_equiv_valuations",
    "print_annotated_context",
    "print_term",
    "print_type",
    "print_value",
    "render_derivation",
    "semantic_deps_oracle",
    "subst_annotated",
    "subst_type",
    "subst_value",
    "value_equiv",
    "values_equiv_semantics",
]

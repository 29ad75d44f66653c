"""Exact probabilistic programming with a linear, partial-sum aware type theory.

Terms are checked by :func:`check_term`, evaluated to exact finite
distributions by :func:`evaluate`, and conditioned with :func:`infer`.
Whole ``.comet`` programs are handled by :func:`load_program`.
"""
from . import derived
from .inference import InferenceResult, Predicate, ZeroMass, condition, infer, marginal, normalize, validity
from .laws import GenConfig, LawReport, run_law_suite
from .program import NotClosed, Program, load_program
from .semantics import Dist, denote, evaluate
from .surface.elaborate import ElaborationError, elaborate
from .surface.lexer import ParseError
from .surface.parser import parse, parse_term, parse_type
from .syntax import BOOL, UNIT, Context, Sum, Tensor, Term, Type, bold
from .typecheck import (
    CannotInfer, LinearityViolation, SideConditionFailed, TypeCheckError, TypeMismatch, ZeroDomain,
    check_disjoint, check_equal, check_leq, check_nonzero_domain, check_term, infer_type,
)

__all__ = [
    "BOOL", "CannotInfer", "Context", "Dist", "ElaborationError", "GenConfig", "InferenceResult",
    "LawReport", "LinearityViolation", "NotClosed", "ParseError", "Predicate", "Program",
    "SideConditionFailed", "Sum", "Tensor", "Term", "Type", "TypeCheckError", "TypeMismatch", "UNIT",
    "ZeroDomain", "ZeroMass", "bold", "check_disjoint", "check_equal", "check_leq",
    "check_nonzero_domain", "check_term", "condition", "denote", "derived", "elaborate", "evaluate",
    "infer", "infer_type", "load_program", "marginal", "normalize", "parse", "parse_term",
    "parse_type", "run_law_suite", "validity",
]

"""Executable algebraic laws checked on randomly generated well-typed terms."""
from .claims import Verdict, decide
from .gen import Gen, GenConfig, gen_predicate, gen_term, gen_type
from .report import LawReport, run_law_suite
from .suite import LAWS, Counterexample, Law, LawResult, check_law, select

__all__ = [
    "Counterexample", "Gen", "GenConfig", "LAWS", "Law", "LawReport", "LawResult", "Verdict",
    "check_law", "decide", "gen_predicate", "gen_term", "gen_type", "run_law_suite", "select",
]

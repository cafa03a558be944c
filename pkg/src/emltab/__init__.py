"""Tableau-based satisfiability checking for multi-agent epistemic logic with
common and distributed knowledge."""
from .closure import ClosureIndex, closure, extended_closure
from .expansion import CutMode, cs_expansions, cut_targets, full_expansions
from .formula import And, Atom, Coalition, Common, Dist, Formula, Not, classify, to_text
from .gen import GenParams, fixpoint_family, gen_formula
from .oracle import brute_force_sat
from .parser import ParseError, parse
from .semantics import (
    KripkeStructure,
    a_reachable,
    check,
    hintikka_from_model,
    hintikka_from_tableau,
    parse_model,
    pseudo_model_from_hintikka,
    verify_hintikka,
)
from .tableau import Verdict, decide, run

__all__ = [
    "And", "Atom", "ClosureIndex", "Coalition", "Common", "CutMode", "Dist",
    "Formula", "GenParams", "KripkeStructure", "Not", "ParseError", "Verdict",
    "a_reachable", "brute_force_sat", "check", "classify", "closure",
    "cs_expansions", "cut_targets", "decide", "extended_closure",
    "fixpoint_family", "full_expansions", "gen_formula", "hintikka_from_model",
    "hintikka_from_tableau", "parse", "parse_model", "pseudo_model_from_hintikka",
    "run", "to_text", "verify_hintikka",
]

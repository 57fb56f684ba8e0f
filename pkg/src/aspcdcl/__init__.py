"""Answer-set solver for ground normal logic programs.

Pipeline: Clark's completion, clause simplification, then conflict-driven
search with unit and well-founded (unfounded-set) propagation.
"""
from .completion import complete
from .model import FALSUM, Clause, Program, Rule
from .oracle import enumerate_answer_sets, is_answer_set, random_program
from .search import SearchConfig, SolveOutcome, solve_program
from .textio import ParseError, parse_program, render_outcome

__all__ = [
    "FALSUM",
    "Clause",
    "ParseError",
    "Program",
    "Rule",
    "SearchConfig",
    "SolveOutcome",
    "complete",
    "enumerate_answer_sets",
    "is_answer_set",
    "parse_program",
    "random_program",
    "render_outcome",
    "solve_program",
]

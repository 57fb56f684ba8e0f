"""Ground program text format and answer-set output protocol.

Syntax::

    % comment
    a :- b, not c.     rule
    a.                 fact
    :- a, not b.       constraint (also ``#false :- a, not b.``)
    #false.            constraint with an empty body
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

from .model import FALSUM, FALSUM_NAME, Program

if TYPE_CHECKING:
    from .search import SolveOutcome, Statistics

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>%[^\n]*)
  | (?P<if>:-)
  | (?P<falsum>\#false\b)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<comma>,)
  | (?P<dot>\.)
  | (?P<paren>[()])
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


class ParseError(ValueError):
    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


def _tokens(text: str):
    line = 1
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        if kind == "nl":
            line += 1
        elif kind in ("ws", "comment"):
            continue
        elif kind == "paren":
            raise ParseError(ParseDiagnostic(
                line, "non-ground input: '(' or ')' found; ground the program first (e.g. with gringo)"))
        elif kind == "bad":
            raise ParseError(ParseDiagnostic(line, f"unexpected character {m.group()!r}"))
        else:
            yield kind, m.group(), line


def parse_program(text: str) -> Program:
    """Parse a ground normal program.  Raises ``ParseError``.

    Atom ids are assigned in order of first appearance, starting at 1.
    """
    prog = Program()
    toks = list(_tokens(text))
    i, n = 0, len(toks)

    def fail(msg: str, line: int):
        raise ParseError(ParseDiagnostic(line, msg))

    def peek(last_line: int):
        if i >= n:
            fail("missing terminating '.'", last_line)
        return toks[i]

    while i < n:
        kind, val, line = toks[i]
        head = None
        falsum_head = False
        if kind == "ident":
            if val == "not":
                fail("'not' is not allowed in a rule head", line)
            head = val
            i += 1
        elif kind == "falsum":
            falsum_head = True
            i += 1
        elif kind != "if":
            fail(f"expected a rule, got {val!r}", line)

        kind, val, line = peek(line)
        body: list[tuple[str, bool]] = []
        if kind == "if":
            i += 1
            while True:
                kind, val, line = peek(line)
                negative = False
                if kind == "ident" and val == "not":
                    negative = True
                    i += 1
                    kind, val, line = peek(line)
                    if kind == "ident" and val == "not":
                        fail("'not' applied to 'not'", line)
                if kind != "ident":
                    fail(f"expected an atom, got {val!r}", line)
                body.append((val, negative))
                i += 1
                kind, val, line = peek(line)
                i += 1
                if kind == "dot":
                    break
                if kind != "comma":
                    fail(f"expected ',' or '.', got {val!r}", line)
        elif kind == "dot":
            if head is None and not falsum_head:
                fail("empty constraint; write '#false.' for an always-violated one", line)
            i += 1
        else:
            fail(f"expected ':-' or '.', got {val!r}", line)

        h = FALSUM if head is None else prog.atom(head)
        pos_ids, neg_ids = [], []
        for name, negative in body:
            (neg_ids if negative else pos_ids).append(prog.atom(name))
        prog.add_rule(h, pos_ids, neg_ids)
    return prog


def format_program(prog: Program) -> str:
    """Debug printer; its output parses back to an isomorphic program."""
    names = prog.names
    lines = []
    for r in prog.rules:
        body = [names[a] for a in r.pos_body] + [f"not {names[a]}" for a in r.neg_body]
        head = "" if r.head == FALSUM else names[r.head]
        if not body:
            lines.append(f"{head or FALSUM_NAME}.")
        elif head:
            lines.append(f"{head} :- {', '.join(body)}.")
        else:
            lines.append(f":- {', '.join(body)}.")
    return "\n".join(lines) + ("\n" if lines else "")


def render_model(model: Iterable[int], names: list[str]) -> str:
    atoms = sorted(a for a in model if a != FALSUM and a < len(names) and names[a])
    return "ANSWER\n" + " ".join(names[a] for a in atoms)


def render_outcome(outcome: "SolveOutcome", names: list[str]) -> str:
    from .search import BUDGET_EXHAUSTED, INCONSISTENT

    parts = [render_model(m, names) for m in outcome.models]
    if outcome.verdict == INCONSISTENT:
        parts.append("INCONSISTENT")
    elif outcome.verdict == BUDGET_EXHAUSTED:
        parts.append("UNKNOWN")
    return "\n".join(parts)


def render_stats(stats: "Statistics") -> str:
    return "\n".join(f"{k}: {v}" for k, v in stats.as_dict().items())

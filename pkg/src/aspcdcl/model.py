"""Atoms, literals, rules, clauses and programs.

Atoms are dense integer ids into a name table.  Atom 0 is the falsity atom
(rendered ``#false``); every constraint uses it as head.

Literals are plain ints: ``2 * atom`` for the positive literal and
``2 * atom + 1`` for its negation, so the complement is ``lit ^ 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

FALSUM = 0
FALSUM_NAME = "#false"

# Clause origins.
COMPLETION = "completion"
LEARNED_CONFLICT = "learned-conflict"
LEARNED_LOOP = "learned-loop"
BLOCKING = "blocking"


def pos(atom: int) -> int:
    return atom << 1


def neg(atom: int) -> int:
    return (atom << 1) | 1


def complement(lit: int) -> int:
    return lit ^ 1


def atom_of(lit: int) -> int:
    return lit >> 1


def is_negative(lit: int) -> bool:
    return bool(lit & 1)


def literal(atom: int, positive: bool = True) -> int:
    return pos(atom) if positive else neg(atom)


def lit_str(lit: int, names: Optional[list[str]] = None) -> str:
    a = lit >> 1
    if names is not None and a < len(names) and names[a]:
        base = names[a]
    elif a == FALSUM:
        base = FALSUM_NAME
    else:
        base = f"_x{a}"
    return f"not {base}" if lit & 1 else base


def _unique(atoms: Iterable[int]) -> tuple[int, ...]:
    return tuple(dict.fromkeys(atoms))


@dataclass(frozen=True)
class Rule:
    """``head :- pos_body, not neg_body.``  A constraint has head ``FALSUM``."""

    head: int
    pos_body: tuple[int, ...] = ()
    neg_body: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pos_body", _unique(self.pos_body))
        object.__setattr__(self, "neg_body", _unique(self.neg_body))

    @property
    def is_constraint(self) -> bool:
        return self.head == FALSUM

    def body(self) -> list[int]:
        """Body as literals, positive part first."""
        return [pos(a) for a in self.pos_body] + [neg(a) for a in self.neg_body]

    def atoms(self) -> set[int]:
        return {self.head, *self.pos_body, *self.neg_body}


class Clause:
    __slots__ = ("lits", "origin", "activity")

    def __init__(self, lits: list[int], origin: str = COMPLETION, activity: float = 0.0):
        self.lits = lits
        self.origin = origin
        self.activity = activity

    @classmethod
    def build(cls, lits: Iterable[int], origin: str = COMPLETION) -> Optional["Clause"]:
        """Deduplicate ``lits``; return None for a tautology."""
        out = list(dict.fromkeys(lits))
        seen = set(out)
        if any(l ^ 1 in seen for l in out):
            return None
        return cls(out, origin)

    @property
    def literals(self) -> list[int]:
        return self.lits

    @property
    def learned(self) -> bool:
        return self.origin in (LEARNED_CONFLICT, LEARNED_LOOP)

    def __len__(self) -> int:
        return len(self.lits)

    def __iter__(self):
        return iter(self.lits)

    def __repr__(self) -> str:
        body = ", ".join(lit_str(l) for l in self.lits)
        return f"Clause({{{body}}}, {self.origin})"


def clause_of_rule(rule: Rule) -> Clause:
    """The clause ``{head} ∪ complement(body)`` satisfied exactly when the rule is."""
    lits = [pos(rule.head)] + [complement(l) for l in rule.body()]
    c = Clause.build(lits)
    if c is None:
        # body contains a and not a; the rule can never fire
        return Clause(list(dict.fromkeys(lits)))
    return c


@dataclass
class Program:
    names: list[str] = field(default_factory=lambda: [FALSUM_NAME])
    rules: list[Rule] = field(default_factory=list)
    _index: dict[str, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.names or self.names[0] != FALSUM_NAME:
            raise ValueError("atom 0 must be #false")
        self._index = {n: i for i, n in enumerate(self.names) if n}

    @property
    def num_atoms(self) -> int:
        return len(self.names)

    def atom(self, name: str) -> int:
        """Intern ``name``, returning its id."""
        a = self._index.get(name)
        if a is None:
            a = len(self.names)
            self.names.append(name)
            self._index[name] = a
        return a

    def lookup(self, name: str) -> Optional[int]:
        return self._index.get(name)

    def add_rule(self, head: int, pos_body: Iterable[int] = (), neg_body: Iterable[int] = ()) -> Rule:
        r = Rule(head, tuple(pos_body), tuple(neg_body))
        for a in r.atoms():
            if not 0 <= a < len(self.names):
                raise ValueError(f"unknown atom id {a}")
        self.rules.append(r)
        return r

    def add(self, head: Optional[str], pos_body: Iterable[str] = (), neg_body: Iterable[str] = ()) -> Rule:
        """Add a rule by atom names; ``head=None`` makes a constraint."""
        h = FALSUM if head is None else self.atom(head)
        return self.add_rule(h, [self.atom(n) for n in pos_body], [self.atom(n) for n in neg_body])

    def original_atoms(self) -> range:
        return range(1, len(self.names))

    def validate(self) -> None:
        n = len(self.names)
        for i, r in enumerate(self.rules):
            for a in r.atoms():
                if not 0 <= a < n:
                    raise ValueError(f"rule {i} references unknown atom {a}")

"""Clark's completion with one auxiliary atom per rule body."""
from __future__ import annotations

from dataclasses import dataclass, field

from .model import Program, complement, neg, pos


@dataclass
class ClauseSet:
    """Clauses over atoms ``0 .. num_atoms-1`` as literal tuples.

    ``eliminated`` lists atoms removed by preprocessing; the solver never
    branches on them and their values come from reconstruction.
    """

    num_atoms: int
    clauses: list[tuple[int, ...]]
    eliminated: set[int] = field(default_factory=set)

    @property
    def inconsistent(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)


@dataclass
class AuxMap:
    rule_to_aux: list[int]
    aux_to_rule: dict[int, int]

    def aux(self, rule_index: int) -> int:
        return self.rule_to_aux[rule_index]


@dataclass
class CompletionResult:
    program: Program
    clauses: ClauseSet
    aux: AuxMap
    original_atom_count: int


def complete(p: Program) -> CompletionResult:
    """Return Comp(p).

    For every atom ``a`` of the atom table (``#false`` included) with defining
    rules r1..rn: ``{not a, aux_r1, ..., aux_rn}``.  For every rule r:
    ``{H(r), not aux_r}``, ``{aux_r} ∪ complement(B(r))`` and
    ``{not aux_r, l}`` for each body literal l.
    """
    k = p.num_atoms
    rule_to_aux = [k + i for i in range(len(p.rules))]
    aux_to_rule = {x: i for i, x in enumerate(rule_to_aux)}

    defining: list[list[int]] = [[] for _ in range(k)]
    for i, r in enumerate(p.rules):
        defining[r.head].append(i)

    out: list[tuple[int, ...]] = []
    for a in range(k):
        out.append((neg(a),) + tuple(pos(rule_to_aux[i]) for i in defining[a]))
    for i, r in enumerate(p.rules):
        x = rule_to_aux[i]
        body = r.body()
        out.append((pos(r.head), neg(x)))
        out.append((pos(x),) + tuple(complement(l) for l in body))
        for l in body:
            out.append((neg(x), l))

    return CompletionResult(
        program=p,
        clauses=ClauseSet(k + len(p.rules), out),
        aux=AuxMap(rule_to_aux, aux_to_rule),
        original_atom_count=k,
    )



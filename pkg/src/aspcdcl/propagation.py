"""Assignment trail, two-watched-literal lists and unit propagation.

Truth values are kept per *literal* (``TRUE``/``FALSE``/``UNDEF``) so the hot
loop never has to look at polarity bits.
"""
from __future__ import annotations

from typing import Iterable, Optional, Union

from .model import Clause

UNDEF = 0
TRUE = 1
FALSE = -1

# Reason markers for assignments not implied by a clause.
DECISION = "decision"
INITIAL = "initial"

Reason = Union[Clause, str]


class Trail:
    def __init__(self, num_atoms: int):
        self.num_atoms = num_atoms
        self.value = [UNDEF] * (2 * num_atoms)
        self.level = [0] * num_atoms
        self.reason: list[Optional[Reason]] = [None] * num_atoms
        self.stack: list[int] = []
        self.level_marks: list[int] = []
        self.head = 0
        self.propagations = 0

    @property
    def decision_level(self) -> int:
        return len(self.level_marks)

    def value_of(self, lit: int) -> int:
        return self.value[lit]

    def is_true(self, lit: int) -> bool:
        return self.value[lit] == TRUE

    def is_false(self, lit: int) -> bool:
        return self.value[lit] == FALSE

    def assigned(self, atom: int) -> bool:
        return self.value[atom << 1] != UNDEF

    def position(self) -> dict[int, int]:
        return {l >> 1: i for i, l in enumerate(self.stack)}

    def enqueue(self, lit: int, reason: Reason) -> Optional[Reason]:
        """Assign ``lit``; returns None, or ``reason`` when ``lit`` is already false."""
        v = self.value[lit]
        if v == TRUE:
            return None
        if v == FALSE:
            return reason
        self.value[lit] = TRUE
        self.value[lit ^ 1] = FALSE
        a = lit >> 1
        self.level[a] = len(self.level_marks)
        self.reason[a] = reason
        self.stack.append(lit)
        return None

    def new_level(self) -> None:
        self.level_marks.append(len(self.stack))

    def decide(self, lit: int) -> None:
        self.new_level()
        self.enqueue(lit, DECISION)

    def backtrack(self, level: int) -> list[int]:
        """Undo every level above ``level``; returns the removed literals."""
        if level >= len(self.level_marks):
            return []
        mark = self.level_marks[level]
        removed = self.stack[mark:]
        value = self.value
        reason = self.reason
        for lit in removed:
            value[lit] = UNDEF
            value[lit ^ 1] = UNDEF
            reason[lit >> 1] = None
        del self.stack[mark:]
        del self.level_marks[level:]
        if self.head > mark:
            self.head = mark
        return removed


def enqueue(lit: int, reason: Reason, t: Trail) -> Optional[Reason]:
    return t.enqueue(lit, reason)


class WatchLists:
    """``long[l]``: clauses watching ``l``; ``binary[l]``: ``(other, clause)``
    pairs.  Both are visited when ``l`` becomes false."""

    def __init__(self, num_atoms: int):
        self.long: list[list[Clause]] = [[] for _ in range(2 * num_atoms)]
        self.binary: list[list[tuple[int, Clause]]] = [[] for _ in range(2 * num_atoms)]

    def attach(self, c: Clause) -> None:
        lits = c.lits
        if len(lits) == 2:
            a, b = lits
            self.binary[a].append((b, c))
            self.binary[b].append((a, c))
        else:
            self.long[lits[0]].append(c)
            self.long[lits[1]].append(c)

    def detach(self, c: Clause) -> None:
        lits = c.lits
        if len(lits) == 2:
            for x in lits:
                self.binary[x] = [e for e in self.binary[x] if e[1] is not c]
        else:
            for x in lits[:2]:
                ws = self.long[x]
                for i, d in enumerate(ws):
                    if d is c:
                        del ws[i]
                        break


def unit_propagate(t: Trail, w: WatchLists) -> Optional[Clause]:
    """Propagate the trail from ``t.head`` to fixpoint; return a falsified clause or None."""
    value = t.value
    level = t.level
    reason = t.reason
    stack = t.stack
    binary = w.binary
    long_ = w.long
    dl = len(t.level_marks)
    head = t.head
    processed = 0
    while head < len(stack):
        false_lit = stack[head] ^ 1
        head += 1
        processed += 1

        for other, c in binary[false_lit]:
            v = value[other]
            if v == TRUE:
                continue
            if v == FALSE:
                t.head = len(stack)
                t.propagations += processed
                return c
            value[other] = TRUE
            value[other ^ 1] = FALSE
            a = other >> 1
            level[a] = dl
            reason[a] = c
            stack.append(other)

        ws = long_[false_lit]
        n = len(ws)
        i = j = 0
        while i < n:
            c = ws[i]
            i += 1
            lits = c.lits
            if lits[0] == false_lit:
                lits[0] = lits[1]
                lits[1] = false_lit
            first = lits[0]
            vf = value[first]
            if vf == TRUE:
                ws[j] = c
                j += 1
                continue
            for k in range(2, len(lits)):
                l = lits[k]
                if value[l] != FALSE:
                    lits[1] = l
                    lits[k] = false_lit
                    long_[l].append(c)
                    break
            else:
                ws[j] = c
                j += 1
                if vf == FALSE:
                    while i < n:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    t.head = len(stack)
                    t.propagations += processed
                    return c
                value[first] = TRUE
                value[first ^ 1] = FALSE
                a = first >> 1
                level[a] = dl
                reason[a] = c
                stack.append(first)
        del ws[j:]
    t.head = head
    t.propagations += processed
    return None


def check_watches(t: Trail, w: WatchLists, clauses: Iterable[Clause]) -> list[str]:
    """Watch-integrity audit used by tests and debug runs.  Empty list = ok."""
    problems = []
    value = t.value
    for c in clauses:
        lits = c.lits
        if len(lits) < 2:
            continue
        if len(lits) == 2:
            a, b = lits
            if sum(e[1] is c for e in w.binary[a]) != 1 or sum(e[1] is c for e in w.binary[b]) != 1:
                problems.append(f"binary clause {c} not watched exactly once per literal")
            continue
        n0 = sum(d is c for d in w.long[lits[0]])
        n1 = sum(d is c for d in w.long[lits[1]])
        elsewhere = sum(d is c for l in lits[2:] for d in w.long[l])
        if n0 != 1 or n1 != 1 or elsewhere:
            problems.append(f"clause {c} watch lists inconsistent")
            continue
        if any(value[l] == TRUE for l in lits):
            continue
        if t.head < len(t.stack):
            continue
        watched_false = [l for l in lits[:2] if value[l] == FALSE]
        free = [l for l in lits[2:] if value[l] != FALSE]
        if watched_false and free:
            problems.append(f"clause {c} watches a false literal while {free[0]} is free")
    return problems

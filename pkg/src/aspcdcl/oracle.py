"""Brute-force reference semantics and random program generation.

Nothing here shares code with the solver: answer sets are checked straight
from the reduct definition and enumerated by trying every candidate set.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .model import FALSUM, Program

DEFAULT_GUARD = 20


def least_model(rules: Iterable[tuple[int, Iterable[int]]]) -> set[int]:
    """Least model of a positive program given as ``(head, pos_body)`` pairs,
    by counter-based forward chaining."""
    rules = [(h, set(b)) for h, b in rules]
    waiting: dict[int, list[int]] = {}
    missing = []
    model: set[int] = set()
    queue = []
    for i, (h, body) in enumerate(rules):
        missing.append(len(body))
        for b in body:
            waiting.setdefault(b, []).append(i)
        if not body:
            queue.append(h)
    while queue:
        a = queue.pop()
        if a in model:
            continue
        model.add(a)
        for i in waiting.get(a, ()):
            missing[i] -= 1
            if missing[i] == 0:
                queue.append(rules[i][0])
    return model


def least_model_naive(rules: Iterable[tuple[int, Iterable[int]]]) -> set[int]:
    """Iterate the immediate-consequence operator from the empty set."""
    rules = [(h, frozenset(b)) for h, b in rules]
    model: set[int] = set()
    while True:
        nxt = {h for h, b in rules if b <= model}
        if nxt == model:
            return model
        model = nxt


def reduct(p: Program, m: Iterable[int]) -> list[tuple[int, tuple[int, ...]]]:
    ms = set(m)
    return [(r.head, r.pos_body) for r in p.rules if not ms.intersection(r.neg_body)]


def is_answer_set(p: Program, m: Iterable[int]) -> bool:
    ms = set(m)
    if FALSUM in ms:
        raise ValueError("candidate must not contain #false")
    return least_model(reduct(p, ms)) == ms


def enumerate_answer_sets(p: Program, guard: int = DEFAULT_GUARD) -> set[frozenset[int]]:
    """All answer sets over the original atoms, by exhausting every subset.

    Candidates are processed as bitmask vectors; the least model of each
    candidate's reduct is computed for the whole block at once.
    """
    k = p.num_atoms - 1
    if k > guard:
        raise ValueError(f"{k} atoms exceeds the oracle guard of {guard}")
    if k > 62:
        raise ValueError("candidate bitmasks are limited to 62 atoms")
    if k == 0:
        return {frozenset()} if least_model(reduct(p, ())) == set() else set()
    dtype = np.int64
    rules = [
        (r.head, sum(1 << (b - 1) for b in r.pos_body), sum(1 << (b - 1) for b in r.neg_body))
        for r in p.rules
    ]
    found: set[frozenset[int]] = set()
    block = 1 << min(k, 16)
    total = 1 << k
    for lo in range(0, total, block):
        cand = np.arange(lo, min(lo + block, total), dtype=dtype)
        lm = np.zeros_like(cand)
        bottom = np.zeros(cand.shape, dtype=bool)
        while True:
            prev = lm
            new = lm.copy()
            for head, pmask, nmask in rules:
                fire = ((cand & nmask) == 0) & ((lm & pmask) == pmask)
                if head == FALSUM:
                    bottom |= fire
                else:
                    new |= np.where(fire, dtype(1 << (head - 1)), dtype(0))
            lm = new
            if np.array_equal(lm, prev):
                break
        ok = (lm == cand) & ~bottom
        for c in cand[ok]:
            c = int(c)
            found.add(frozenset(a for a in range(1, k + 1) if c >> (a - 1) & 1))
    return found


def enumerate_answer_sets_naive(p: Program, guard: int = 12) -> set[frozenset[int]]:
    """Scalar enumeration through ``is_answer_set``; cross-check for the vector path."""
    k = p.num_atoms - 1
    if k > guard:
        raise ValueError(f"{k} atoms exceeds the oracle guard of {guard}")
    out = set()
    for mask in range(1 << k):
        m = frozenset(a for a in range(1, k + 1) if mask >> (a - 1) & 1)
        if is_answer_set(p, m):
            out.add(m)
    return out


@dataclass
class GeneratorParams:
    atom_count: int = 6
    rule_count: int = 8
    max_body: int = 3
    neg_probability: float = 0.5
    cycle_bias: float = 0.5
    constraint_probability: float = 0.1
    seed: int = 0

    def __post_init__(self):
        for name in ("neg_probability", "cycle_bias", "constraint_probability"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.atom_count < 1 or self.rule_count < 1 or self.max_body < 0:
            raise ValueError("counts must be positive")


def random_program(params: GeneratorParams) -> Program:
    """Seeded random ground normal program over atoms ``p1..pN``.

    With probability ``cycle_bias`` the first two rules are made mutually
    positively dependent (a self-loop when only one atom exists), and each
    later positive body atom is drawn from already-used heads.
    """
    rng = random.Random(params.seed)
    prog = Program()
    atoms = [prog.atom(f"p{i}") for i in range(1, params.atom_count + 1)]
    heads: list[int] = []
    forced = (
        params.rule_count >= 2
        and params.constraint_probability < 1.0
        and rng.random() < params.cycle_bias
    )
    for i in range(params.rule_count):
        if forced and i < 2:
            if i == 0:
                a = rng.choice(atoms)
                b = rng.choice([x for x in atoms if x != a] or [a])
                cycle = (a, b)
            head = cycle[i]
            pos_body = [cycle[1 - i]]
        else:
            head = FALSUM if rng.random() < params.constraint_probability else rng.choice(atoms)
            pos_body = []
        neg_body = []
        size = rng.randint(0 if not pos_body else 1, max(params.max_body, len(pos_body)))
        while len(pos_body) + len(neg_body) < size:
            if rng.random() < params.neg_probability:
                neg_body.append(rng.choice(atoms))
            elif heads and rng.random() < params.cycle_bias:
                pos_body.append(rng.choice(heads))
            else:
                pos_body.append(rng.choice(atoms))
        prog.add_rule(head, pos_body, neg_body)
        if head != FALSUM:
            heads.append(head)
    return prog

"""Clause-level simplification in the SatELite style.

Steps: level-0 unit propagation, subsumption and self-subsuming resolution
to fixpoint, then bounded variable elimination.  Eliminated atoms are
recorded so a model of the result can be extended back to the input.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .completion import ClauseSet, CompletionResult
from .model import FALSUM, neg

log = logging.getLogger(__name__)


@dataclass
class SimplifyConfig:
    max_elim_occurrences: int = 20
    max_clause_growth: int = 0
    freeze_original_atoms: bool = False

    def __post_init__(self):
        if self.max_elim_occurrences < 0 or self.max_clause_growth < 0:
            raise ValueError("simplification bounds must be non-negative")


@dataclass
class ReconstructionLog:
    entries: list[tuple[int, list[tuple[int, ...]]]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def eliminated(self) -> set[int]:
        return {a for a, _ in self.entries}


class _Simplifier:
    def __init__(self, num_atoms: int, frozen: set[int], cfg: SimplifyConfig):
        self.n = num_atoms
        self.frozen = frozen
        self.cfg = cfg
        self.clauses: dict[int, frozenset[int]] = {}
        self.occ: list[set[int]] = [set() for _ in range(2 * num_atoms)]
        self.next_id = 0
        self.fixed: dict[int, int] = {}  # atom -> true literal
        self.units: list[int] = []
        self.empty = False
        self.eliminated: set[int] = set()
        self.log = ReconstructionLog()
        self.sub_queue: list[int] = []
        self.touched: set[int] = set()

    # clause database ----------------------------------------------------

    def add(self, lits: Iterable[int]) -> Optional[int]:
        c = set()
        for l in lits:
            a = l >> 1
            if a in self.fixed:
                if self.fixed[a] == l:
                    return None
                continue
            c.add(l)
        if any(l ^ 1 in c for l in c):
            return None
        if not c:
            self.empty = True
            return None
        if len(c) == 1:
            self.units.append(next(iter(c)))
            return None
        cid = self.next_id
        self.next_id += 1
        fc = frozenset(c)
        self.clauses[cid] = fc
        for l in fc:
            self.occ[l].add(cid)
            self.touched.add(l >> 1)
        self.sub_queue.append(cid)
        return cid

    def remove(self, cid: int) -> None:
        c = self.clauses.pop(cid)
        for l in c:
            self.occ[l].discard(cid)
            self.touched.add(l >> 1)

    def strengthen(self, cid: int, lit: int) -> None:
        c = self.clauses[cid] - {lit}
        self.occ[lit].discard(cid)
        self.touched.add(lit >> 1)
        if len(c) == 1:
            self.remove_quiet(cid, c)
            self.units.append(next(iter(c)))
            return
        self.clauses[cid] = c
        self.sub_queue.append(cid)

    def remove_quiet(self, cid: int, c: frozenset[int]) -> None:
        del self.clauses[cid]
        for l in c:
            self.occ[l].discard(cid)
            self.touched.add(l >> 1)

    # unit propagation ---------------------------------------------------

    def propagate_units(self) -> None:
        while self.units and not self.empty:
            l = self.units.pop()
            a = l >> 1
            if a in self.fixed:
                if self.fixed[a] != l:
                    self.empty = True
                continue
            self.fixed[a] = l
            for cid in list(self.occ[l]):
                self.remove(cid)
            for cid in list(self.occ[l ^ 1]):
                c = self.clauses[cid] - {l ^ 1}
                self.remove(cid)
                if not c:
                    self.empty = True
                    return
                if len(c) == 1:
                    self.units.append(next(iter(c)))
                else:
                    self.add(c)

    # subsumption --------------------------------------------------------

    def subsume_all(self) -> None:
        while self.sub_queue and not self.empty:
            cid = self.sub_queue.pop()
            if cid in self.clauses:
                self.backward_subsume(cid)
            if self.units:
                self.propagate_units()

    def backward_subsume(self, cid: int) -> None:
        c = self.clauses[cid]
        occ = self.occ
        best = min(c, key=lambda l: len(occ[l]) + len(occ[l ^ 1]))
        cands = (occ[best] | occ[best ^ 1]) - {cid}
        for did in sorted(cands):
            d = self.clauses.get(did)
            if d is None or len(d) < len(c):
                continue
            diff = c - d
            if not diff:
                self.remove(did)
            elif len(diff) == 1:
                (l,) = diff
                if l ^ 1 in d:
                    self.strengthen(did, l ^ 1)
            if cid not in self.clauses:
                return

    # variable elimination -----------------------------------------------

    def occurrences(self, a: int) -> int:
        return len(self.occ[a << 1]) + len(self.occ[(a << 1) | 1])

    def try_eliminate(self, a: int) -> bool:
        p_ids = sorted(self.occ[a << 1])
        n_ids = sorted(self.occ[(a << 1) | 1])
        limit = len(p_ids) + len(n_ids) + self.cfg.max_clause_growth
        p_lit = a << 1
        resolvents: list[frozenset[int]] = []
        for pid in p_ids:
            pc = self.clauses[pid] - {p_lit}
            for nid in n_ids:
                nc = self.clauses[nid] - {p_lit | 1}
                if any(l ^ 1 in nc for l in pc):
                    continue
                resolvents.append(pc | nc)
                if len(resolvents) > limit:
                    return False
        recorded = [tuple(sorted(self.clauses[i])) for i in p_ids + n_ids]
        for cid in p_ids + n_ids:
            self.remove(cid)
        self.eliminated.add(a)
        self.log.entries.append((a, recorded))
        for r in resolvents:
            if not r:
                self.empty = True
                return True
            if len(r) == 1:
                self.units.append(next(iter(r)))
            else:
                self.add(r)
        return True

    def eliminate(self) -> None:
        heap = []
        for a in range(self.n):
            if self.eligible(a):
                heap.append((self.occurrences(a), a))
        heapq.heapify(heap)
        self.touched.clear()
        while heap and not self.empty:
            cnt, a = heapq.heappop(heap)
            if not self.eligible(a):
                continue
            cur = self.occurrences(a)
            if cur != cnt:
                heapq.heappush(heap, (cur, a))
                continue
            if cur == 0 or cur > self.cfg.max_elim_occurrences:
                continue
            self.touched.clear()
            if self.try_eliminate(a):
                self.propagate_units()
                self.subsume_all()
            for b in self.touched:
                if self.eligible(b):
                    heapq.heappush(heap, (self.occurrences(b), b))
            self.touched.clear()

    def eligible(self, a: int) -> bool:
        return a not in self.frozen and a not in self.fixed and a not in self.eliminated

    def result(self) -> ClauseSet:
        if self.empty:
            return ClauseSet(self.n, [()], set(self.eliminated))
        out = [(l,) for _, l in sorted(self.fixed.items())]
        out += [tuple(sorted(c)) for _, c in sorted(self.clauses.items())]
        return ClauseSet(self.n, out, set(self.eliminated))


def loop_frozen_atoms(c: CompletionResult, g=None) -> set[int]:
    """Atoms the unfounded-set check reads: cyclic atoms, the aux atoms of
    their rules and every body atom of those rules."""
    from .unfounded import build_dep_graph

    if g is None:
        g = build_dep_graph(c.program)
    frozen: set[int] = set()
    for i, r in enumerate(c.program.rules):
        if r.head != FALSUM and g.is_cyclic_atom(r.head):
            frozen.add(r.head)
            frozen.add(c.aux.rule_to_aux[i])
            frozen.update(r.pos_body)
            frozen.update(r.neg_body)
    return frozen


def simplify_clauses(
    num_atoms: int,
    clauses: Iterable[Iterable[int]],
    cfg: Optional[SimplifyConfig] = None,
    frozen: Iterable[int] = (),
    eliminate: bool = True,
) -> tuple[ClauseSet, ReconstructionLog]:
    """Simplify a raw clause list; atoms in ``frozen`` are never eliminated."""
    cfg = cfg or SimplifyConfig()
    s = _Simplifier(num_atoms, set(frozen), cfg)
    for c in clauses:
        s.add(c)
        if s.empty:
            break
    s.propagate_units()
    s.subsume_all()
    if eliminate and not s.empty:
        s.eliminate()
    out = s.result()
    log.debug("simplify: %d atoms eliminated, %d clauses left", len(s.eliminated), len(out))
    return out, s.log


def simplify(
    c: CompletionResult,
    cfg: Optional[SimplifyConfig] = None,
    frozen: Optional[Iterable[int]] = None,
) -> tuple[ClauseSet, ReconstructionLog]:
    """Simplify a completed program.

    ``#false`` is asserted false and never eliminated; the atoms needed by
    unfounded-set detection are frozen, as are all original atoms when
    ``cfg.freeze_original_atoms`` is set.
    """
    cfg = cfg or SimplifyConfig()
    keep = {FALSUM} | loop_frozen_atoms(c)
    if frozen is not None:
        keep |= set(frozen)
    if cfg.freeze_original_atoms:
        keep |= set(range(c.original_atom_count))
    clauses = [(neg(FALSUM),)] + list(c.clauses.clauses)
    return simplify_clauses(c.clauses.num_atoms, clauses, cfg, keep)


def reconstruct(model: list[bool], log: ReconstructionLog) -> list[bool]:
    """Extend ``model`` (indexed by atom) to the eliminated atoms.

    Entries are replayed last-eliminated first; each atom defaults to false
    and flips to true only if one of its recorded clauses needs it.
    """
    out = list(model)
    for a, recorded in reversed(log.entries):
        out[a] = False
        for c in recorded:
            if not any(out[l >> 1] != bool(l & 1) for l in c):
                out[a] = True
                break
    return out

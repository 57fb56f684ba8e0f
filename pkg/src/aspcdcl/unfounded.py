"""Positive dependency graph, source pointers and unfounded-set detection.

Only atoms in cyclic strongly connected components need explicit support
tracking; everything else is handled by the completion clauses.  Each such
atom keeps a *source*: a rule whose body is not falsified and whose
same-component positive body atoms are themselves sourced.  Atoms left
without a source after a re-sourcing fixpoint form an unfounded set, and the
solver is handed one loop-formula clause per call.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .completion import AuxMap
from .model import FALSUM, Program, neg, pos
from .propagation import FALSE, TRUE, Trail

NO_SOURCE = -1


@dataclass
class DepGraph:
    num_atoms: int
    nodes: list[int]
    edges: dict[int, list[int]]
    scc_id: list[int]
    cyclic: list[bool]

    @property
    def tight(self) -> bool:
        return not any(self.cyclic)

    def is_cyclic_atom(self, a: int) -> bool:
        return self.cyclic[self.scc_id[a]]

    def cyclic_atoms(self) -> list[int]:
        return [a for a in range(self.num_atoms) if self.cyclic[self.scc_id[a]]]

    def components(self) -> list[list[int]]:
        comps: list[list[int]] = [[] for _ in self.cyclic]
        for a in range(self.num_atoms):
            comps[self.scc_id[a]].append(a)
        return comps


def strongly_connected_components(n: int, succ: dict[int, list[int]]) -> list[int]:
    """Iterative Tarjan; returns a component index per vertex ``0..n-1``."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


def build_dep_graph(p: Program) -> DepGraph:
    n = p.num_atoms
    edges: dict[int, list[int]] = {}
    heads = set()
    for r in p.rules:
        if r.head == FALSUM:
            continue
        heads.add(r.head)
        out = edges.setdefault(r.head, [])
        for b in r.pos_body:
            if b not in out:
                out.append(b)
    scc = strongly_connected_components(n, edges)
    ncomp = max(scc) + 1 if n else 0
    size = [0] * ncomp
    for a in range(n):
        size[scc[a]] += 1
    cyclic = [s > 1 for s in size]
    for a, out in edges.items():
        if a in out:
            cyclic[scc[a]] = True
    return DepGraph(n, sorted(heads), edges, scc, cyclic)


def is_unfounded(x: Iterable[int], t: Trail, p: Program) -> bool:
    """Definition check: every rule with head in ``x`` has a false body
    literal, or a positive body atom in ``x``, or a true head outside ``x``."""
    xs = set(x)
    if not xs:
        raise ValueError("unfounded-set check needs a non-empty set")
    value = t.value
    for r in p.rules:
        if r.head not in xs:
            continue
        if any(value[l] == FALSE for l in r.body()):
            continue
        if xs.intersection(r.pos_body):
            continue
        # single-atom heads: H(r) \ X is empty whenever H(r) meets X
        if any(value[pos(h)] == TRUE for h in {r.head} - xs):
            continue
        return False
    return True


class SourceState:
    """Source pointers for the atoms of cyclic components, plus the queue of
    unfounded atoms still awaiting their falsity clause."""

    def __init__(self, p: Program, aux: AuxMap, g: DepGraph):
        self.program = p
        self.graph = g
        n = p.num_atoms
        scc = g.scc_id
        self.aux = aux
        self.rule_head: dict[int, int] = {}
        self.rule_body: dict[int, list[int]] = {}
        self.rule_scc_pos: dict[int, tuple[int, ...]] = {}
        self.rules_of: dict[int, list[int]] = {}
        self.body_watch: dict[int, list[int]] = {}
        self.scc_pos_occ: dict[int, list[int]] = {}
        self.cyclic_atoms = g.cyclic_atoms()
        for a in self.cyclic_atoms:
            self.rules_of[a] = []
        for i, r in enumerate(p.rules):
            h = r.head
            if h == FALSUM or not g.cyclic[scc[h]]:
                continue
            body = r.body()
            inside = tuple(b for b in r.pos_body if scc[b] == scc[h])
            self.rule_head[i] = h
            self.rule_body[i] = body
            self.rule_scc_pos[i] = inside
            self.rules_of[h].append(i)
            for l in body:
                self.body_watch.setdefault(l, []).append(i)
            for b in inside:
                self.scc_pos_occ.setdefault(b, []).append(i)
        self.source = [NO_SOURCE] * n
        self.unsourced: set[int] = set(self.cyclic_atoms)
        self.checked = 0
        self.pending: deque[int] = deque()
        self.pending_lits: list[int] = []
        self.unfounded_sets = 0
        self.last_unfounded: list[int] = []

    def on_backtrack(self, t: Trail) -> None:
        if self.checked > len(t.stack):
            self.checked = len(t.stack)
        self.pending.clear()

    def _unsource(self, a: int) -> None:
        source = self.source
        source[a] = NO_SOURCE
        self.unsourced.add(a)
        work = [a]
        occ = self.scc_pos_occ
        head = self.rule_head
        while work:
            b = work.pop()
            for r in occ.get(b, ()):
                h = head[r]
                if source[h] == r:
                    source[h] = NO_SOURCE
                    self.unsourced.add(h)
                    work.append(h)

    def _falsified(self, r: int, value: list[int]) -> bool:
        for l in self.rule_body[r]:
            if value[l] == FALSE:
                return True
        return False

    def _scan(self, t: Trail) -> None:
        stack = t.stack
        source = self.source
        watch = self.body_watch
        head = self.rule_head
        for i in range(self.checked, len(stack)):
            for r in watch.get(stack[i] ^ 1, ()):
                if source[head[r]] == r:
                    self._unsource(head[r])
        self.checked = len(stack)

    def _resource(self, t: Trail) -> list[int]:
        value = t.value
        source = self.source
        cand = [a for a in self.unsourced if value[a << 1] != FALSE]
        if not cand:
            return []
        cand.sort()
        queue = deque(cand)
        queued = set(cand)
        rules_of = self.rules_of
        scc_pos = self.rule_scc_pos
        occ = self.scc_pos_occ
        head = self.rule_head
        while queue:
            a = queue.popleft()
            queued.discard(a)
            if source[a] != NO_SOURCE or value[a << 1] == FALSE:
                continue
            for r in rules_of[a]:
                if all(source[b] != NO_SOURCE for b in scc_pos[r]) and not self._falsified(r, value):
                    source[a] = r
                    self.unsourced.discard(a)
                    for r2 in occ.get(a, ()):
                        h = head[r2]
                        if source[h] == NO_SOURCE and h not in queued and value[h << 1] != FALSE:
                            queue.append(h)
                            queued.add(h)
                    break
        return sorted(a for a in self.unsourced if value[a << 1] != FALSE)

    def _external_lits(self, xs: set[int], value: list[int]) -> list[int]:
        lits: dict[int, None] = {}
        for a in sorted(xs):
            for r in self.rules_of[a]:
                if xs.intersection(self.rule_scc_pos[r]):
                    continue
                x = self.aux.rule_to_aux[r]
                if value[pos(x)] == FALSE:
                    lits[pos(x)] = None
                    continue
                for l in self.rule_body[r]:
                    if value[l] == FALSE:
                        lits[l] = None
                        break
                else:
                    raise AssertionError(f"rule {r} supports unfounded set {sorted(xs)}")
        return list(lits)

    def propagate(self, t: Trail) -> Optional[list[int]]:
        """One well-founded step: a falsity clause for one unfounded atom, or None."""
        value = t.value
        while self.pending:
            a = self.pending.popleft()
            if value[pos(a)] != FALSE:
                return [neg(a)] + self.pending_lits
        self._scan(t)
        unsupported = self._resource(t)
        if not unsupported:
            return None
        scc = self.graph.scc_id
        comp = scc[unsupported[0]]
        x = [a for a in unsupported if scc[a] == comp]
        xs = set(x)
        self.unfounded_sets += 1
        self.last_unfounded = x
        self.pending_lits = self._external_lits(xs, value)
        self.pending = deque(x[1:])
        return [neg(x[0])] + self.pending_lits

    def check(self, t: Trail) -> list[str]:
        """Debug audit of the source invariants."""
        problems = []
        value = t.value
        source = self.source
        indeg: dict[int, int] = {}
        succ: dict[int, list[int]] = {}
        for a in self.cyclic_atoms:
            r = source[a]
            if r == NO_SOURCE:
                continue
            if self.rule_head.get(r) != a:
                problems.append(f"atom {a} sourced by foreign rule {r}")
                continue
            for b in self.rule_scc_pos[r]:
                if source[b] == NO_SOURCE:
                    problems.append(f"atom {a} sourced through unsourced atom {b}")
                succ.setdefault(b, []).append(a)
                indeg[a] = indeg.get(a, 0) + 1
            if self.checked == len(t.stack) and self._falsified(r, value):
                problems.append(f"atom {a} sourced by falsified rule {r}")
        sourced = [a for a in self.cyclic_atoms if source[a] != NO_SOURCE]
        ready = [a for a in sourced if indeg.get(a, 0) == 0]
        seen = 0
        while ready:
            b = ready.pop()
            seen += 1
            for a in succ.get(b, ()):
                indeg[a] -= 1
                if indeg[a] == 0:
                    ready.append(a)
        if seen != len(sourced):
            problems.append("source relation is cyclic")
        return problems


def well_founded_propagation(t: Trail, s: SourceState, g: Optional[DepGraph] = None) -> Optional[list[int]]:
    return s.propagate(t)

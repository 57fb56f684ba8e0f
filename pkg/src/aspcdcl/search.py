"""Conflict-driven answer-set search over the completed clause database.

The loop is the iterative form of the usual recursive scheme: propagate
(unit propagation interleaved with well-founded propagation), return the
interpretation when total, otherwise branch; conflicts are analysed to the
first UIP and the learned clause drives a backjump.
"""
from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .completion import AuxMap, ClauseSet, complete
from .model import (
    BLOCKING,
    FALSUM,
    FALSUM_NAME,
    LEARNED_CONFLICT,
    LEARNED_LOOP,
    Clause,
    Program,
    neg,
    pos,
)
from .preprocess import ReconstructionLog, SimplifyConfig, reconstruct, simplify
from .propagation import (
    FALSE,
    INITIAL,
    TRUE,
    UNDEF,
    Trail,
    WatchLists,
    unit_propagate,
)
from .unfounded import DepGraph, SourceState, build_dep_graph

MODELS_FOUND = "models-found"
INCONSISTENT = "inconsistent"
BUDGET_EXHAUSTED = "budget-exhausted"

TIME_CHECK_INTERVAL = 1024


def luby(i: int) -> int:
    """i-th term (1-based) of 1,1,2,1,1,2,4,1,1,2,1,1,2,4,8,..."""
    if i < 1:
        raise ValueError("luby index starts at 1")
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


@dataclass
class SearchConfig:
    luby_base: int = 64
    var_inc: float = 1.0
    var_decay: float = 0.95
    clause_decay: float = 0.999
    max_learned_factor: float = 1 / 3
    max_learned_growth: float = 1.1
    default_polarity: bool = False  # False: branch on the negative literal
    seed: int = 0
    random_var_freq: float = 0.0
    max_models: int = 1
    time_budget: Optional[float] = None
    conflict_budget: Optional[int] = None
    restarts: bool = True
    phase_saving: bool = True
    minimize: bool = True
    well_founded: bool = True
    check_conflicts: bool = False

    def __post_init__(self):
        if not 0 < self.var_decay <= 1:
            raise ValueError("var_decay must be in (0, 1]")
        if not 0 < self.clause_decay <= 1:
            raise ValueError("clause_decay must be in (0, 1]")
        if self.luby_base < 1:
            raise ValueError("luby_base must be >= 1")
        if self.max_models < 0:
            raise ValueError("max_models must be >= 0")


@dataclass
class Statistics:
    conflicts: int = 0
    decisions: int = 0
    restarts: int = 0
    learned_clauses: int = 0
    deleted_clauses: int = 0
    propagations: int = 0
    unfounded_sets: int = 0
    loop_clauses: int = 0
    solve_time: float = 0.0
    restart_intervals: list[int] = field(default_factory=list, repr=False)

    def as_dict(self, timing: bool = True) -> dict:
        d = {
            "conflicts": self.conflicts,
            "decisions": self.decisions,
            "restarts": self.restarts,
            "learned_clauses": self.learned_clauses,
            "deleted_clauses": self.deleted_clauses,
            "propagations": self.propagations,
            "unfounded_sets": self.unfounded_sets,
            "loop_clauses": self.loop_clauses,
        }
        if timing:
            d["solve_time"] = f"{self.solve_time:.3f}"
        return d


@dataclass
class SolveOutcome:
    verdict: str
    models: list[frozenset[int]]
    stats: Statistics

    @property
    def satisfiable(self) -> bool:
        return bool(self.models)


@dataclass
class CompiledProblem:
    program: Program
    clauses: ClauseSet
    graph: DepGraph
    aux: AuxMap
    log: ReconstructionLog
    original_atom_count: int


def compile_program(
    p: Program,
    simplify_clauses: bool = True,
    simplify_cfg: Optional[SimplifyConfig] = None,
    max_models: int = 1,
) -> CompiledProblem:
    comp = complete(p)
    graph = build_dep_graph(p)
    if simplify_clauses:
        cfg = simplify_cfg or SimplifyConfig()
        if max_models != 1 and not cfg.freeze_original_atoms:
            cfg = SimplifyConfig(cfg.max_elim_occurrences, cfg.max_clause_growth, True)
        clauses, rlog = simplify(comp, cfg)
    else:
        clauses, rlog = comp.clauses, ReconstructionLog()
    return CompiledProblem(p, clauses, graph, comp.aux, rlog, comp.original_atom_count)


def compile_clauses(num_atoms: int, clauses: list[tuple[int, ...]]) -> CompiledProblem:
    """Wrap a plain clause set (atoms ``1..num_atoms-1``, no rules) for the solver."""
    p = Program([FALSUM_NAME] + [f"x{i}" for i in range(1, num_atoms)])
    return CompiledProblem(
        p, ClauseSet(num_atoms, list(clauses)), build_dep_graph(p),
        AuxMap([], {}), ReconstructionLog(), num_atoms)


class Solver:
    def __init__(self, cp: CompiledProblem, cfg: Optional[SearchConfig] = None):
        self.cp = cp
        self.cfg = cfg = cfg or SearchConfig()
        n = cp.clauses.num_atoms
        self.n = n
        self.trail = Trail(n)
        self.watches = WatchLists(n)
        self.stats = Statistics()
        self.rng = random.Random(cfg.seed)

        self.activity = [0.0] * n
        self.var_inc = cfg.var_inc
        self.cla_inc = 1.0
        self.phase = [cfg.default_polarity] * n
        self.seen = [False] * n

        self.clauses: list[Clause] = []
        self.learned: list[Clause] = []
        self.loop_clauses: list[Clause] = []
        self.inconsistent = False

        elim = cp.clauses.eliminated
        self.decision_atoms = [a for a in range(1, n) if a not in elim]
        self.num_active = len(self.decision_atoms) + 1
        self.heap = [(0.0, a) for a in self.decision_atoms]
        heapq.heapify(self.heap)

        self.sources: Optional[SourceState] = None
        if cfg.well_founded and not cp.graph.tight:
            self.sources = SourceState(cp.program, cp.aux, cp.graph)

        # hooks for instrumented runs
        self.on_loop_clause: Optional[Callable[[list[int]], None]] = None
        self.on_learn: Optional[Callable[[list[int], int], None]] = None
        self.check_failures: list[str] = []

        if self.trail.enqueue(neg(FALSUM), INITIAL) is not None:
            self.inconsistent = True
        for lits in cp.clauses.clauses:
            c = Clause.build(lits)
            if c is None:
                continue
            self._add_input_clause(c)
            if self.inconsistent:
                break
        self.max_learned = cfg.max_learned_factor * len(self.clauses)

    # clause database ------------------------------------------------------

    def _add_input_clause(self, c: Clause) -> None:
        lits = c.lits
        if not lits:
            self.inconsistent = True
            return
        if len(lits) == 1:
            if self.trail.enqueue(lits[0], INITIAL) is not None:
                self.inconsistent = True
            self.clauses.append(c)
            return
        self.clauses.append(c)
        self.watches.attach(c)

    def add_clause(self, lits: list[int], origin: str) -> Optional[Clause]:
        """Attach a clause during search.

        Backjumps as far as needed so that a unit clause propagates at the
        right level and a falsified one has its deepest literal at the
        current level.  Returns the clause when it is falsified.
        """
        t = self.trail
        value = t.value
        level = t.level
        c = Clause(list(dict.fromkeys(lits)), origin)
        if origin == LEARNED_LOOP:
            self.loop_clauses.append(c)
        elif origin == LEARNED_CONFLICT:
            self.learned.append(c)
        else:
            self.clauses.append(c)
        lits = c.lits
        if not lits:
            self.inconsistent = True
            return c
        if len(lits) == 1:
            l = lits[0]
            if value[l] == TRUE and level[l >> 1] == 0:
                return None
            self._backtrack(0)
            if value[l] == FALSE:
                return c
            t.enqueue(l, INITIAL)
            return None
        lits.sort(key=lambda l: (value[l] == FALSE, -level[l >> 1] if value[l] == FALSE else 0))
        self.watches.attach(c)
        v0 = value[lits[0]]
        if v0 == FALSE:
            self._backtrack(level[lits[0] >> 1])
            return c
        if value[lits[1]] == FALSE and v0 == UNDEF:
            self._backtrack(level[lits[1] >> 1])
            t.enqueue(lits[0], c)
        return None

    def _backtrack(self, lvl: int) -> None:
        t = self.trail
        if t.decision_level <= lvl:
            return
        removed = t.backtrack(lvl)
        heap = self.heap
        act = self.activity
        phase = self.phase
        save = self.cfg.phase_saving
        for lit in removed:
            a = lit >> 1
            if save:
                phase[a] = not (lit & 1)
            heapq.heappush(heap, (-act[a], a))
        if self.sources is not None:
            self.sources.on_backtrack(t)

    # heuristics -------------------------------------------------------------

    def _bump_var(self, a: int) -> None:
        act = self.activity
        act[a] += self.var_inc
        if act[a] > 1e100:
            for i in range(self.n):
                act[i] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[b], b) for b in self.decision_atoms if self.trail.value[b << 1] == UNDEF]
            heapq.heapify(self.heap)
        elif self.trail.value[a << 1] == UNDEF:
            heapq.heappush(self.heap, (-act[a], a))

    def _bump_clause(self, c: Clause) -> None:
        c.activity += self.cla_inc
        if c.activity > 1e20:
            for d in self.learned:
                d.activity *= 1e-20
            self.cla_inc *= 1e-20

    def pick_branch_literal(self) -> Optional[int]:
        """Most active unassigned atom (lowest id on ties) in its saved phase."""
        value = self.trail.value
        if self.cfg.random_var_freq > 0 and self.rng.random() < self.cfg.random_var_freq:
            free = [a for a in self.decision_atoms if value[a << 1] == UNDEF]
            if free:
                a = self.rng.choice(free)
                return pos(a) if self.phase[a] else neg(a)
        heap = self.heap
        act = self.activity
        while heap:
            negact, a = heapq.heappop(heap)
            if value[a << 1] != UNDEF or -negact != act[a]:
                continue
            return pos(a) if self.phase[a] else neg(a)
        for a in self.decision_atoms:
            if value[a << 1] == UNDEF:
                return pos(a) if self.phase[a] else neg(a)
        return None

    def reduce_learned(self) -> int:
        """Delete the less active half of the deletable learned clauses."""
        if len(self.learned) <= self.max_learned:
            return 0
        t = self.trail
        reason = t.reason
        value = t.value
        keep: list[Clause] = []
        deletable: list[Clause] = []
        for c in self.learned:
            lits = c.lits
            if len(lits) <= 2:
                keep.append(c)
                continue
            l0 = lits[0]
            if value[l0] == TRUE and reason[l0 >> 1] is c:
                keep.append(c)
                continue
            deletable.append(c)
        deletable.sort(key=lambda c: c.activity)
        k = len(deletable) // 2
        for c in deletable[:k]:
            self.watches.detach(c)
        keep.extend(deletable[k:])
        self.learned = keep
        self.stats.deleted_clauses += k
        self.max_learned *= self.cfg.max_learned_growth
        return k

    # propagation ------------------------------------------------------------

    def propagate_fixpoint(self) -> Optional[Clause]:
        t = self.trail
        w = self.watches
        src = self.sources
        while True:
            confl = unit_propagate(t, w)
            if confl is not None:
                return confl
            if src is None:
                return None
            lits = src.propagate(t)
            if lits is None:
                return None
            self.stats.loop_clauses += 1
            if self.on_loop_clause is not None:
                self.on_loop_clause(lits)
            confl = self.add_clause(lits, LEARNED_LOOP)
            if confl is not None:
                return confl

    # conflict analysis ------------------------------------------------------

    def analyze_conflict(self, confl: Clause) -> tuple[list[int], int]:
        """First-UIP learning; returns (clause with asserting literal first, backjump level)."""
        t = self.trail
        level = t.level
        reason = t.reason
        stack = t.stack
        seen = self.seen
        dl = t.decision_level
        learnt = [-1]
        path = 0
        p = -1
        idx = len(stack) - 1
        while True:
            if confl.origin == LEARNED_CONFLICT:
                self._bump_clause(confl)
            for q in confl.lits:
                if q == p:
                    continue
                a = q >> 1
                if not seen[a] and level[a] > 0:
                    seen[a] = True
                    self._bump_var(a)
                    if level[a] >= dl:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[stack[idx] >> 1]:
                idx -= 1
            p = stack[idx]
            idx -= 1
            seen[p >> 1] = False
            path -= 1
            if path == 0:
                break
            confl = reason[p >> 1]
        learnt[0] = p ^ 1

        clear = learnt[1:]
        if self.cfg.minimize and len(learnt) > 2:
            abstract = 0
            for l in learnt[1:]:
                abstract |= 1 << (level[l >> 1] & 31)
            kept = [learnt[0]]
            for l in learnt[1:]:
                r = reason[l >> 1]
                if r.__class__ is not Clause or not self._redundant(l, abstract, clear):
                    kept.append(l)
            learnt = kept
        for l in clear:
            seen[l >> 1] = False

        if len(learnt) == 1:
            bj = 0
        else:
            mi = 1
            for i in range(2, len(learnt)):
                if level[learnt[i] >> 1] > level[learnt[mi] >> 1]:
                    mi = i
            learnt[1], learnt[mi] = learnt[mi], learnt[1]
            bj = level[learnt[1] >> 1]
        return learnt, bj

    def _redundant(self, p: int, abstract: int, clear: list[int]) -> bool:
        t = self.trail
        level = t.level
        reason = t.reason
        seen = self.seen
        work = [p]
        top = len(clear)
        while work:
            q = work.pop()
            c = reason[q >> 1]
            qa = q >> 1
            for l in c.lits:
                a = l >> 1
                if a == qa or seen[a] or level[a] == 0:
                    continue
                r = reason[a]
                if r.__class__ is Clause and (1 << (level[a] & 31)) & abstract:
                    seen[a] = True
                    work.append(l)
                    clear.append(l)
                else:
                    for x in clear[top:]:
                        seen[x >> 1] = False
                    del clear[top:]
                    return False
        return True

    def _check_learned(self, learnt: list[int], bj: int) -> None:
        t = self.trail
        value = t.value
        level = t.level
        dl = t.decision_level
        problems = []
        if any(value[l] != FALSE for l in learnt):
            problems.append("learned clause not falsified by the trail")
        cur = sum(1 for l in learnt if level[l >> 1] == dl)
        if cur != 1:
            problems.append(f"learned clause has {cur} current-level literals")
        lv = sorted((level[l >> 1] for l in learnt), reverse=True)
        second = lv[1] if len(lv) > 1 else 0
        if bj != second:
            problems.append(f"backjump level {bj} != second-highest level {second}")
        if problems:
            self.check_failures.extend(problems)

    # main loop --------------------------------------------------------------

    def _total(self) -> bool:
        return len(self.trail.stack) >= self.num_active

    def _model(self) -> frozenset[int]:
        value = self.trail.value
        full = [value[a << 1] == TRUE for a in range(self.n)]
        full = reconstruct(full, self.cp.log)
        k = self.cp.original_atom_count
        return frozenset(a for a in range(1, k) if full[a])

    def _block(self, model: frozenset[int]) -> bool:
        """Exclude ``model`` (over original atoms); False if nothing is left."""
        k = self.cp.original_atom_count
        lits = [neg(a) if a in model else pos(a) for a in range(1, k)]
        self._backtrack(0)
        if not lits:
            return False
        confl = self.add_clause(lits, BLOCKING)
        if self.inconsistent:
            return False
        return confl is None

    def solve(self) -> SolveOutcome:
        cfg = self.cfg
        stats = self.stats
        t = self.trail
        start = time.perf_counter()
        models: list[frozenset[int]] = []
        verdict = None
        deadline = None if cfg.time_budget is None else start + cfg.time_budget
        restart_idx = 1
        since_restart = 0
        next_time_check = TIME_CHECK_INTERVAL

        if self.inconsistent:
            verdict = INCONSISTENT
        while verdict is None:
            confl = self.propagate_fixpoint()
            if confl is not None:
                stats.conflicts += 1
                if t.decision_level == 0:
                    verdict = MODELS_FOUND if models else INCONSISTENT
                    break
                learnt, bj = self.analyze_conflict(confl)
                if cfg.check_conflicts:
                    self._check_learned(learnt, bj)
                if self.on_learn is not None:
                    self.on_learn(learnt, bj)
                self._backtrack(bj)
                if len(learnt) == 1:
                    t.enqueue(learnt[0], INITIAL)
                    self.learned.append(Clause(learnt, LEARNED_CONFLICT))
                else:
                    c = Clause(learnt, LEARNED_CONFLICT)
                    self.learned.append(c)
                    self.watches.attach(c)
                    self._bump_clause(c)
                    t.enqueue(learnt[0], c)
                stats.learned_clauses += 1
                self.var_inc /= cfg.var_decay
                self.cla_inc /= cfg.clause_decay

                since_restart += 1
                if cfg.conflict_budget is not None and stats.conflicts >= cfg.conflict_budget:
                    verdict = BUDGET_EXHAUSTED
                    break
                if deadline is not None and stats.conflicts >= next_time_check:
                    next_time_check += TIME_CHECK_INTERVAL
                    if time.perf_counter() >= deadline:
                        verdict = BUDGET_EXHAUSTED
                        break
                if cfg.restarts and since_restart >= luby(restart_idx) * cfg.luby_base:
                    stats.restart_intervals.append(since_restart)
                    stats.restarts += 1
                    restart_idx += 1
                    since_restart = 0
                    self._backtrack(0)
                self.reduce_learned()
                continue

            if self._total():
                m = self._model()
                models.append(m)
                if cfg.max_models and len(models) >= cfg.max_models:
                    verdict = MODELS_FOUND
                    break
                if not self._block(m):
                    verdict = MODELS_FOUND
                    break
                continue

            lit = self.pick_branch_literal()
            if lit is None:
                raise AssertionError("no branching literal on a partial assignment")
            stats.decisions += 1
            if deadline is not None and stats.decisions % TIME_CHECK_INTERVAL == 0:
                if time.perf_counter() >= deadline:
                    verdict = BUDGET_EXHAUSTED
                    break
            t.decide(lit)

        stats.propagations = t.propagations
        if self.sources is not None:
            stats.unfounded_sets = self.sources.unfounded_sets
        stats.solve_time = time.perf_counter() - start
        return SolveOutcome(verdict, models, stats)


def solve(cp: CompiledProblem, cfg: Optional[SearchConfig] = None) -> SolveOutcome:
    return Solver(cp, cfg).solve()


def solve_program(
    p: Program,
    cfg: Optional[SearchConfig] = None,
    simplify_clauses: bool = True,
    simplify_cfg: Optional[SimplifyConfig] = None,
) -> SolveOutcome:
    cfg = cfg or SearchConfig()
    cp = compile_program(p, simplify_clauses, simplify_cfg, cfg.max_models)
    return Solver(cp, cfg).solve()


"""Reference implementations used only by the tests.

Each is deliberately naive and shares no code with the solver path it checks.
"""
from __future__ import annotations

import itertools

from aspcdcl.model import FALSUM, Program


def lit_true(lit, assign):
    """Value of ``lit`` under ``assign`` (dict atom -> bool); None when unassigned."""
    v = assign.get(lit >> 1)
    if v is None:
        return None
    return v != bool(lit & 1)


def naive_unit_fixpoint(clauses, assign):
    """Scan every clause until nothing changes.  Returns (assign, conflict?)."""
    assign = dict(assign)
    changed = True
    while changed:
        changed = False
        for c in clauses:
            vals = [lit_true(l, assign) for l in c]
            if any(v is True for v in vals):
                continue
            free = {l for l, v in zip(c, vals) if v is None}
            if not free:
                return assign, True
            if len(free) == 1:
                (l,) = free
                assign[l >> 1] = not (l & 1)
                changed = True
    return assign, False


def satisfies(clauses, model):
    """``model``: sequence/dict indexable by atom -> bool."""
    return all(any(model[l >> 1] != bool(l & 1) for l in c) for c in clauses)


def truth_table_models(clauses, atoms):
    """All total assignments over ``atoms`` (others absent) satisfying ``clauses``."""
    atoms = sorted(atoms)
    out = set()
    for bits in itertools.product((False, True), repeat=len(atoms)):
        m = dict(zip(atoms, bits))
        if satisfies(clauses, m):
            out.add(frozenset(a for a in atoms if m[a]))
    return out


def extend_to_completion(p: Program, answer_set):
    """Assignment over original + aux atoms: aux_r true iff B(r) holds."""
    k = p.num_atoms
    m = {a: (a in answer_set) for a in range(k)}
    m[FALSUM] = False
    for i, r in enumerate(p.rules):
        m[k + i] = all(m[a] for a in r.pos_body) and not any(m[a] for a in r.neg_body)
    return m


def reference_first_uip_clause(trail, conflict_lits):
    """Learned clause from an explicit implication graph.

    Builds the graph from the trail's reasons, locates the first UIP by
    dominator search (every path from the decision to the conflict passes it),
    and collects the lower-level literals with an arc into the set of nodes
    lying between the UIP and the conflict.
    """
    dl = trail.decision_level
    level = trail.level
    reason = trail.reason
    stack = trail.stack
    preds = {}
    for lit in stack:
        r = reason[lit >> 1]
        if hasattr(r, "lits"):
            preds[lit] = [l ^ 1 for l in r.lits if l >> 1 != lit >> 1]
        else:
            preds[lit] = []
    kappa = "conflict"
    preds[kappa] = [l ^ 1 for l in conflict_lits]
    succ = {}
    for v, ps in preds.items():
        for u in ps:
            succ.setdefault(u, []).append(v)
    decision = stack[trail.level_marks[dl - 1]]

    def reaches(src, dst, removed=None):
        seen = {src}
        todo = [src]
        while todo:
            v = todo.pop()
            if v == dst:
                return True
            for w in succ.get(v, ()):
                if w != removed and w not in seen:
                    seen.add(w)
                    todo.append(w)
        return False

    current = [l for l in stack if level[l >> 1] == dl]
    doms = [v for v in current if v == decision or not reaches(decision, kappa, removed=v)]
    pos_in_trail = {l: i for i, l in enumerate(stack)}
    uip = max(doms, key=lambda v: pos_in_trail[v])

    # nodes strictly after the UIP on some path from it to the conflict
    fwd = set()
    todo = [uip]
    while todo:
        v = todo.pop()
        for w in succ.get(v, ()):
            if w not in fwd:
                fwd.add(w)
                todo.append(w)
    between = {v for v in fwd if v == kappa or reaches(v, kappa)}
    lower = set()
    for v in between:
        for u in preds[v]:
            if u != uip and level[u >> 1] < dl and level[u >> 1] > 0:
                lower.add(u ^ 1)
    return uip, {uip ^ 1} | lower

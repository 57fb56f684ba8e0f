from aspcdcl.model import Clause
from aspcdcl.propagation import INITIAL, Trail, WatchLists


def load_clauses(n, clauses):
    """Trail and watches over ``n`` atoms with ``clauses`` attached; units enqueued.

    Returns (trail, watches, clause objects, conflict among the units?).
    """
    t = Trail(n)
    w = WatchLists(n)
    objs = []
    conflict = False
    for lits in clauses:
        c = Clause.build(lits)
        if c is None:
            continue
        objs.append(c)
        if len(c.lits) == 1:
            conflict |= t.enqueue(c.lits[0], INITIAL) is not None
        else:
            w.attach(c)
    return t, w, objs, conflict

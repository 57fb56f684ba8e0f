"""Hand-ground benchmark encodings."""
from __future__ import annotations

import itertools
import random

from .model import Program


def random_digraph(nodes: int, edges: int, seed: int, hamiltonian: bool = True) -> list[tuple[int, int]]:
    """Random simple digraph; with ``hamiltonian`` a random Hamiltonian cycle
    is planted first so the instance is satisfiable."""
    if edges > nodes * (nodes - 1):
        raise ValueError("too many edges for a simple digraph")
    rng = random.Random(seed)
    chosen: dict[tuple[int, int], None] = {}
    if hamiltonian and nodes >= 2:
        order = list(range(nodes))
        rng.shuffle(order)
        for i in range(nodes):
            chosen[(order[i], order[(i + 1) % nodes])] = None
    while len(chosen) < edges:
        u, v = rng.randrange(nodes), rng.randrange(nodes)
        if u != v:
            chosen[(u, v)] = None
    return sorted(chosen)


def hamiltonian_program(nodes: int, edges: list[tuple[int, int]], start: int = 0) -> Program:
    """Directed Hamiltonian cycle via reachability from ``start``.

    ``in_u_v :- not out_u_v.``  ``out_u_v :- not in_u_v.`` pick edges; at most
    one chosen edge leaves and enters each node; every node must be reached
    along chosen edges.  The reachability rules make the program non-tight.
    """
    p = Program()
    ins = {}
    for u, v in edges:
        i, o = f"in_{u}_{v}", f"out_{u}_{v}"
        p.add(i, neg_body=[o])
        p.add(o, neg_body=[i])
        ins[(u, v)] = i
    by_src: dict[int, list[str]] = {}
    by_dst: dict[int, list[str]] = {}
    for (u, v), a in ins.items():
        by_src.setdefault(u, []).append(a)
        by_dst.setdefault(v, []).append(a)
    for group in list(by_src.values()) + list(by_dst.values()):
        for a, b in itertools.combinations(group, 2):
            p.add(None, [a, b])
    for (u, v), a in ins.items():
        if u == start:
            p.add(f"reached_{v}", [a])
        else:
            p.add(f"reached_{v}", [f"reached_{u}", a])
    for v in range(nodes):
        p.add(None, neg_body=[f"reached_{v}"])
    return p


def count_hamiltonian_cycles(nodes: int, edges: list[tuple[int, int]]) -> int:
    """Directed Hamiltonian cycles by permutation search (edge sets, start fixed at 0)."""
    es = set(edges)
    if nodes == 1:
        return 0
    count = 0
    for perm in itertools.permutations(range(1, nodes)):
        tour = (0,) + perm
        if all((tour[i], tour[(i + 1) % nodes]) in es for i in range(nodes)):
            count += 1
    return count


def pigeonhole_program(holes: int) -> Program:
    """``holes + 1`` pigeons into ``holes`` holes; always inconsistent and
    exponentially hard for resolution, which makes it a reliable slow instance."""
    p = Program()
    pigeons = holes + 1
    for i in range(pigeons):
        for j in range(holes):
            p.add(f"p_{i}_{j}", neg_body=[f"n_{i}_{j}"])
            p.add(f"n_{i}_{j}", neg_body=[f"p_{i}_{j}"])
        p.add(None, [f"n_{i}_{j}" for j in range(holes)])
    for j in range(holes):
        for i, k in itertools.combinations(range(pigeons), 2):
            p.add(None, [f"p_{i}_{j}", f"p_{k}_{j}"])
    return p

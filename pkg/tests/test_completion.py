import random

from oracles import extend_to_completion, satisfies, truth_table_models

from aspcdcl.completion import complete
from aspcdcl.model import FALSUM, neg, pos
from aspcdcl.oracle import GeneratorParams, enumerate_answer_sets, random_program
from aspcdcl.textio import parse_program
from aspcdcl.unfounded import build_dep_graph


def _clauses(res):
    return {frozenset(c) for c in res.clauses.clauses}


def test_rule_with_mixed_body():
    res = complete(parse_program("a :- b, not c."))
    a, b, c = 1, 2, 3
    x = res.aux.aux(0)
    assert x == 4
    assert _clauses(res) == {
        frozenset({neg(FALSUM)}),
        frozenset({neg(a), pos(x)}),
        frozenset({neg(b)}),
        frozenset({neg(c)}),
        frozenset({pos(a), neg(x)}),
        frozenset({pos(x), neg(b), pos(c)}),
        frozenset({neg(x), pos(b)}),
        frozenset({neg(x), neg(c)}),
    }


def test_fact():
    res = complete(parse_program("a."))
    x = res.aux.aux(0)
    assert _clauses(res) == {
        frozenset({neg(FALSUM)}),
        frozenset({neg(1), pos(x)}),
        frozenset({pos(1), neg(x)}),
        frozenset({pos(x)}),
    }


def test_constraint_forces_aux_false():
    res = complete(parse_program(":- a."))
    x = res.aux.aux(0)
    cl = _clauses(res)
    assert frozenset({neg(1)}) in cl
    assert frozenset({pos(FALSUM), neg(x)}) in cl
    # with ⊥ false the only model has aux (and a) false
    assert truth_table_models(list(cl) + [(neg(FALSUM),)], [0, 1, x]) == {frozenset()}


def test_duplicate_rules_get_distinct_aux():
    res = complete(parse_program("a :- b.\na :- b."))
    assert res.aux.rule_to_aux[0] != res.aux.rule_to_aux[1]
    assert res.aux.aux_to_rule == {x: i for i, x in enumerate(res.aux.rule_to_aux)}


def _programs(n, tight_only=False, **kw):
    rng = random.Random(4242)
    out = []
    seed = 0
    while len(out) < n:
        seed += 1
        params = GeneratorParams(
            atom_count=rng.randint(1, 6), rule_count=rng.randint(1, 8), seed=seed, **kw)
        p = random_program(params)
        if tight_only and not build_dep_graph(p).tight:
            continue
        out.append(p)
    return out


def test_clause_count_invariant():
    for p in _programs(300):
        res = complete(p)
        expected = p.num_atoms + 2 * len(p.rules) + sum(len(r.body()) for r in p.rules)
        assert len(res.clauses) == expected


def test_aux_ids_disjoint_from_originals():
    for p in _programs(50):
        res = complete(p)
        assert all(x >= p.num_atoms for x in res.aux.rule_to_aux)
        assert len(set(res.aux.rule_to_aux)) == len(p.rules)


def test_tight_programs_completion_models_are_answer_sets():
    for p in _programs(150, tight_only=True):
        res = complete(p)
        clauses = res.clauses.clauses + [(neg(FALSUM),)]
        atoms = range(res.clauses.num_atoms)
        k = p.num_atoms
        projected = {frozenset(a for a in m if 0 < a < k) for m in truth_table_models(clauses, atoms)}
        assert projected == enumerate_answer_sets(p)


def test_answer_sets_extend_to_completion_models():
    for p in _programs(200, cycle_bias=0.8):
        res = complete(p)
        for m in enumerate_answer_sets(p):
            ext = extend_to_completion(p, m)
            assert satisfies(res.clauses.clauses, ext)
            for x in res.aux.rule_to_aux:
                flipped = dict(ext)
                flipped[x] = not ext[x]
                assert not satisfies(res.clauses.clauses, flipped)

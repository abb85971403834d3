import random
from itertools import permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from otrank import automata, oracle
from otrank.constraints import BITS, constraint_set, make_bit
from otrank.generate import EPSILON, AttestedForm, AttestedSurfaceSet, GrammarSpec, check, check_sset
from otrank.rank import (
    Clause,
    FormulaSet,
    cd,
    compact,
    compile_clause,
    edcd,
    mrcd,
    rank_sset,
    rankable_single,
    rcd,
    rcd_all,
    totalize,
)

from gramgen import candidate_list, random_formula_set, random_forms, random_grammar


def brute_formula(f: FormulaSet) -> bool:
    return any(f.satisfied_by(p) for p in permutations(range(f.n)))


def phi_d():
    a, b, c, d, e, ff = range(6)
    names = ("a", "b", "c", "d", "e", "f")
    return FormulaSet(
        6,
        [Clause(frozenset({a, b, c}), frozenset({d})), Clause(frozenset({b, e, ff}), frozenset({d}))],
        names,
    )


def test_rcd_phi_d_places_d_late_enough():
    f = phi_d()
    res = rcd(f)
    assert res.consistent
    pos = {c: i for i, c in enumerate(res.ranking)}
    b_first = pos[1] < pos[3]
    both = min(pos[0], pos[2]) < pos[3] and min(pos[4], pos[5]) < pos[3]
    assert b_first or both
    assert f.satisfied_by(res.ranking)


def test_rcd_detects_cycle():
    f = FormulaSet(2, [Clause(frozenset({0}), frozenset({1})), Clause(frozenset({1}), frozenset({0}))])
    assert not rcd(f).consistent
    assert not cd(f).consistent


def test_empty_member_clause_is_inconsistent():
    f = FormulaSet(2, [Clause(frozenset(), frozenset({1}))])
    assert not rcd(f).consistent
    assert not cd(f).consistent


def test_loserless_clauses_dropped():
    f = FormulaSet(3, [Clause(frozenset({0}), frozenset())])
    assert f.clauses == []
    assert rcd(f).ranking == (0, 1, 2)


def test_out_of_range_id():
    from otrank.errors import InputError

    with pytest.raises(InputError):
        FormulaSet(2, [Clause(frozenset({5}), frozenset({0}))])


def test_zero_constraints():
    assert rcd(FormulaSet(0, [])).ranking == ()


@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(0, 8))
@settings(max_examples=300, deadline=None)
def test_rcd_and_cd_match_exhaustive_search(seed, n, m):
    f = random_formula_set(random.Random(seed), n, m)
    expected = brute_formula(f)
    r = rcd(f)
    assert r.consistent == expected
    assert r.diagnostics.get("clauses_eliminated", 0) <= len(f.clauses)
    assert r.diagnostics.get("backpointer_visits", 0) <= f.size
    if expected:
        assert f.satisfied_by(r.ranking)
    c = cd(f)
    assert c.consistent == expected
    if expected:
        assert f.satisfied_by(c.ranking)
        assert c.diagnostics["passes"] <= n + 1


def test_totalize_and_compact():
    assert totalize([2, 0, 2, 1]) == (1, 3, 0, 2)
    assert compact([5, 0, 5, 3]) == [2, 0, 2, 1]


def test_compile_clause():
    g = GrammarSpec(
        BITS,
        (EPSILON,),
        {EPSILON: automata.build_straightline(BITS, 2)},
        constraint_set(BITS, [("A", make_bit(1, "1", 2)), ("B", make_bit(2, "1", 2))]),
    )
    cl = compile_clause(g.constraints, "10", "01")
    assert cl == Clause(frozenset({0}), frozenset({1}))


def _learner_case(seed):
    rng = random.Random(seed)
    g = random_grammar(rng, max_n=5)
    forms = random_forms(rng, g, consistent=rng.random() < 0.6)
    return g, forms


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=120, deadline=None)
def test_learners_match_brute_rank(seed):
    g, forms = _learner_case(seed)
    expected, _ = oracle.brute_rank(g, forms, max_len=8)
    results = {"rcd_all": rcd_all(g, forms), "edcd": edcd(g, forms), "mrcd": mrcd(g, forms)}
    for name, res in results.items():
        assert res.consistent == expected, name
        if res.consistent:
            assert all(check(g, res.ranking, x) for x in forms)
    if expected:
        assert results["edcd"].diagnostics["errors"] <= g.n**2


def test_edcd_accepts_initial_ranking():
    rng = random.Random(11)
    g = random_grammar(rng, max_n=4)
    forms = random_forms(rng, g, consistent=True)
    res = edcd(g, forms, r0=tuple(reversed(range(g.n))))
    assert res.consistent


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_rank_sset_matches_brute_rank(seed):
    rng = random.Random(seed)
    g = random_grammar(rng, max_n=5)
    ssets = []
    for u in g.lexicon:
        cands = candidate_list(g, u)
        members = rng.sample(cands, rng.randint(1, max(1, len(cands) // 2)))
        ssets.append(AttestedSurfaceSet(u, automata.from_strings(g.alphabet, members)))
    expected, _ = oracle.brute_rank(g, ssets=ssets, max_len=8)
    for kwargs in ({"strategy": "search"}, {"strategy": "search", "memo": False}, {"strategy": "enumerate"}):
        res = rank_sset(g, ssets, **kwargs)
        assert res.consistent == expected, kwargs
        if expected:
            assert all(check_sset(g, res.ranking, x) for x in ssets)


def test_rank_sset_strategy_selection():
    from otrank.errors import InputError, ResourceLimitError

    g = GrammarSpec(
        BITS,
        (EPSILON,),
        {EPSILON: automata.universal(BITS)},
        constraint_set(BITS, [("A", make_bit(1, "1", 2))]),
    )
    infinite = AttestedSurfaceSet(EPSILON, automata.universal(BITS))
    assert rank_sset(g, [infinite]).diagnostics["strategy"] == "search"
    with pytest.raises(ResourceLimitError):
        rank_sset(g, [infinite], strategy="enumerate")
    with pytest.raises(InputError):
        rank_sset(g, [infinite], strategy="magic")
    finite = AttestedSurfaceSet(EPSILON, automata.from_strings(BITS, ["1", "01"]))
    assert rank_sset(g, [finite]).diagnostics["strategy"] == "enumerate"


def test_rank_sset_empty_intersection_is_no():
    g = GrammarSpec(
        BITS,
        (EPSILON,),
        {EPSILON: automata.build_straightline(BITS, 2)},
        constraint_set(BITS, [("A", make_bit(1, "1", 2))]),
    )
    res = rank_sset(g, [AttestedSurfaceSet(EPSILON, automata.from_strings(BITS, ["1"]))])
    assert not res.consistent


def _binary_grammar(rng):
    r = 3
    gen = automata.from_strings(BITS, rng.sample(["".join(p) for p in product("01", repeat=r)], 5))
    named = [(f"b{i}{w}", make_bit(i, w, r)) for i in range(1, r + 1) for w in "01" if rng.random() < 0.6]
    named = named or [("b11", make_bit(1, "1", r))]
    return GrammarSpec(BITS, (EPSILON,), {EPSILON: gen}, constraint_set(BITS, named[:6]))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_rankable_single_matches_brute_rank(seed):
    rng = random.Random(seed)
    g = _binary_grammar(rng)
    x = AttestedForm(EPSILON, rng.choice(candidate_list(g, EPSILON)))
    expected, _ = oracle.brute_rank(g, [x], max_len=8)
    res = rankable_single(g, x)
    assert res.consistent == expected


def test_rankable_single_rejects_non_binary():
    from otrank.constraints import make_short
    from otrank.errors import InputError

    g = GrammarSpec(
        BITS,
        (EPSILON,),
        {EPSILON: automata.build_straightline(BITS, 2)},
        constraint_set(BITS, [("S", make_short(BITS))]),
    )
    with pytest.raises(InputError):
        rankable_single(g, AttestedForm(EPSILON, "01"))

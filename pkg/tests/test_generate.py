import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from otrank import automata, oracle
from otrank.automata import Alphabet
from otrank.constraints import constraint_set, make_early
from otrank.errors import InputError
from otrank.generate import (
    EPSILON,
    AttestedForm,
    AttestedSurfaceSet,
    GrammarSpec,
    beatable,
    best,
    check,
    check_sset,
    in_range,
    opt,
    opt_val,
    opt_val_z,
    sset_witness,
)

from gramgen import candidate_list, random_grammar

DIGITS = Alphabet(tuple("12345678"))


def early_grammar(length):
    gen = automata.build_straightline(DIGITS, length)
    named = [(f"Early{j}", make_early(str(j), DIGITS)) for j in range(1, 9)]
    return GrammarSpec(DIGITS, (EPSILON,), {EPSILON: gen}, constraint_set(DIGITS, named))


def test_early_ranking_favors_581():
    g = early_grammar(3)
    ranking = g.ranking(["Early5", "Early8", "Early1", "Early2", "Early3", "Early4", "Early6", "Early7"])
    best_set = opt(g, ranking, EPSILON)
    assert [x for x, _ in automata.enumerate_accepted(best_set, 10, 3)] == ["581"]
    assert check(g, ranking, AttestedForm(EPSILON, "581"))
    assert not check(g, ranking, AttestedForm(EPSILON, "518"))


def test_early_permutation_of_all_vertices():
    g = early_grammar(8)
    names = ["Early5", "Early8", "Early1", "Early2", "Early3", "Early4", "Early6", "Early7"]
    best_set = opt(g, g.ranking(names), EPSILON)
    assert automata.shortest_string(best_set) == "58123467"
    assert opt_val(g, g.ranking(names), EPSILON) == tuple(range(8))


def test_ranking_must_be_permutation():
    g = early_grammar(2)
    with pytest.raises(InputError):
        opt(g, (0, 1), EPSILON)
    with pytest.raises(InputError):
        g.ranking(["Early9"])


def test_check_rejects_non_candidate():
    g = early_grammar(2)
    with pytest.raises(InputError):
        check(g, tuple(range(8)), AttestedForm(EPSILON, "123"))


def test_threshold_length_checked():
    g = early_grammar(2)
    with pytest.raises(InputError):
        beatable(g, tuple(range(8)), EPSILON, (0, 0))


def _case(seed):
    rng = random.Random(seed)
    g = random_grammar(rng)
    ranking = list(range(g.n))
    rng.shuffle(ranking)
    return rng, g, tuple(ranking)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_generation_matches_brute_force(seed):
    rng, g, ranking = _case(seed)
    for u in g.lexicon:
        vec, argmin = oracle.brute_opt(g, ranking, u, 8)
        assert opt_val(g, ranking, u) == vec
        got = {x for x, _ in automata.enumerate_accepted(opt(g, ranking, u), 10_000, 8)}
        assert got == argmin
        assert opt_val_z(g, ranking, u) == (vec[-1] == 0)
        for x in candidate_list(g, u):
            assert check(g, ranking, AttestedForm(u, x)) == (x in argmin)
        k = tuple(v + rng.choice([-1, 0, 0, 1]) for v in vec)
        assert beatable(g, ranking, u, k) == (vec < k)
        assert best(g, ranking, u, k) == (vec == k)
        k2 = tuple(v + rng.choice([0, 1]) for v in vec)
        assert in_range(g, ranking, u, k, k2) == (k <= vec <= k2)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_check_sset_matches_brute_force(seed):
    rng, g, ranking = _case(seed)
    u = g.lexicon[0]
    cands = candidate_list(g, u)
    members = rng.sample(cands, rng.randint(1, len(cands)))
    x_set = automata.from_strings(g.alphabet, members)
    _, argmin = oracle.brute_opt(g, ranking, u, 8)
    expected = bool(argmin & set(members))
    sset = AttestedSurfaceSet(u, x_set)
    assert check_sset(g, ranking, sset) == expected
    w = sset_witness(g, ranking, sset)
    assert (w is not None) == expected
    if expected:
        assert w in argmin and w in members


def test_check_sset_errors_on_set_without_candidates():
    g = early_grammar(2)
    x_set = automata.from_strings(DIGITS, ["1"])
    with pytest.raises(InputError):
        check_sset(g, tuple(range(8)), AttestedSurfaceSet(EPSILON, x_set))


def test_unknown_underlying_form():
    g = early_grammar(2)
    with pytest.raises(InputError):
        opt(g, tuple(range(8)), "zz")

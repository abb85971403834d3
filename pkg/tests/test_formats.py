import random

import pytest

from otrank import formats
from otrank.constraints import CnfFormula
from otrank.errors import InputError
from otrank.generate import AttestedForm
from otrank.reductions import (
    Digraph,
    gen_cnfsat_check,
    gen_hamilton,
    gen_msa,
    gen_msalsb,
    gen_orderable,
    gen_permutation_grammar,
    gen_qsat2,
    gen_satunsat_range,
)

from gramgen import random_grammar

PHI = CnfFormula(3, ((1, 2), (-1, 3)))
CYCLE = Digraph(3, frozenset({(1, 2), (2, 3), (3, 1)}))


def test_token_escape():
    assert formats.token("") == "<eps>"
    assert formats.untoken("<eps>") == ""
    assert formats.untoken(formats.token("ab")) == "ab"


@pytest.mark.parametrize("seed", range(10))
def test_grammar_round_trip(tmp_path, seed):
    g = random_grammar(random.Random(seed))
    formats.save_grammar(g, tmp_path)
    assert formats.load_grammar(tmp_path) == g


def test_permutation_grammar_round_trip(tmp_path):
    g = gen_permutation_grammar(3)
    formats.save_grammar(g, tmp_path)
    assert formats.load_grammar(tmp_path) == g


@pytest.mark.parametrize(
    "make",
    [
        lambda: gen_hamilton(CYCLE),
        lambda: gen_msa(PHI),
        lambda: gen_cnfsat_check(PHI),
        lambda: gen_satunsat_range(PHI, PHI),
        lambda: gen_qsat2(PHI, 1),
        lambda: gen_msalsb(PHI),
        lambda: gen_orderable(CYCLE),
    ],
)
def test_instance_round_trip(tmp_path, make):
    inst = make()
    formats.save_instance(inst, tmp_path)
    assert formats.load_instance(tmp_path) == inst


def test_pairs_and_forms(tmp_path):
    p = tmp_path / "pairs.txt"
    formats.write_pairs(p, [("", "ab", "")])
    assert formats.read_pairs(p) == [("", "ab", "")]
    f = tmp_path / "forms.txt"
    formats.write_forms(f, [AttestedForm("u", "x")])
    assert formats.read_forms(f) == [AttestedForm("u", "x")]


def test_graph_round_trip(tmp_path):
    p = tmp_path / "g.txt"
    formats.write_graph(p, CYCLE)
    assert formats.read_graph(p) == CYCLE


def test_bad_files(tmp_path):
    (tmp_path / "grammar.txt").write_text("gen x y\n")
    with pytest.raises(InputError):
        formats.load_grammar(tmp_path)
    (tmp_path / "g.txt").write_text("edge 1 2\n")
    with pytest.raises(InputError):
        formats.read_graph(tmp_path / "g.txt")
    (tmp_path / "p.txt").write_text("pair a b\n")
    with pytest.raises(InputError):
        formats.read_pairs(tmp_path / "p.txt")
    with pytest.raises(InputError):
        formats.load_grammar(tmp_path / "missing")
    with pytest.raises(InputError):
        formats.parse_vector("1,x")

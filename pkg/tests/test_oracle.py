import pytest

from otrank import oracle
from otrank.constraints import CnfFormula
from otrank.errors import ResourceLimitError
from otrank.reductions import Digraph


def test_brute_sat_lex_least():
    phi = CnfFormula(3, ((1, 2), (-1, 3)))
    assert oracle.brute_sat(phi) == "010"
    assert oracle.brute_sat(CnfFormula(1, ((1,), (-1,)))) is None


def test_brute_msa_unsat_is_all_ones():
    assert oracle.brute_msa(CnfFormula(2, ((1,), (-1,), (2,)))) == "11"


def test_brute_qsat2():
    # exists v1 such that (v1 or v2) and (v1 or not v2) fails for all v2: v1 = 0
    phi = CnfFormula(2, ((1, 2), (1, -2)))
    assert oracle.brute_qsat2(phi, 1)
    assert not oracle.brute_qsat2(CnfFormula(2, ((2, -2),)), 1)


def test_brute_hamilton():
    g = Digraph(3, frozenset({(2, 1), (1, 3)}))
    assert oracle.brute_hamilton_path(g) == (2, 1, 3)
    assert not oracle.brute_hamilton(Digraph(2))


def test_caps():
    with pytest.raises(ResourceLimitError):
        oracle.brute_hamilton(Digraph(oracle.MAX_VERTICES + 1))
    big = CnfFormula(oracle.MAX_VARS + 1, ((oracle.MAX_VARS + 1,),))
    with pytest.raises(ResourceLimitError):
        oracle.brute_sat(big)

"""Instance generators for the hardness constructions.

Each generator returns a self-contained ``ReductionInstance`` whose answer,
computed by ``generate``/``rank``/``derivational``, must equal the answer of
the source problem (Hamilton path, SAT, MSA, QSAT2).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from . import automata
from .automata import Alphabet, Wdfa
from .constraints import (
    BITS,
    CnfFormula,
    constraint_set,
    make_bit,
    make_clause_constraint,
    make_early,
    make_guarded_clause,
    make_membership,
    make_project,
    make_short,
)
from .errors import InputError
from .generate import EPSILON, AttestedForm, AttestedSurfaceSet, GrammarSpec

QBITS = Alphabet(("0", "1", "2"))


class Kind(enum.Enum):
    HAMILTON_RANKSSET = "hamilton"
    MSA_OPTVAL = "msa"
    CNFSAT_BEATABLE = "cnfsat-beatable"
    CNFSAT_CHECK = "cnfsat-check"
    SATUNSAT_RANGE = "satunsat"
    QSAT2_RANKSSET = "qsat2"
    MSALSB_CHECKSSET = "msalsb"
    HAMILTON_ORDERABLE = "orderable"


@dataclass(frozen=True)
class Digraph:
    order: int
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        for i, j in self.edges:
            if not (1 <= i <= self.order and 1 <= j <= self.order):
                raise InputError(f"edge {i}->{j} outside vertices 1..{self.order}")

    @property
    def vertices(self) -> range:
        return range(1, self.order + 1)


@dataclass
class ReductionInstance:
    kind: Kind
    grammar: Optional[GrammarSpec] = None
    ranking: Optional[tuple[int, ...]] = None
    thresholds: dict[str, tuple] = field(default_factory=dict)
    forms: list[AttestedForm] = field(default_factory=list)
    ssets: list[AttestedSurfaceSet] = field(default_factory=list)
    rules: object = None  # derivational.RuleOrderInstance for HAMILTON_ORDERABLE
    oracle: str = ""


def _single(alphabet, gen, named) -> GrammarSpec:
    return GrammarSpec(alphabet, (EPSILON,), {EPSILON: gen}, constraint_set(alphabet, named))


def bit_strings(alphabet: Alphabet, length: int) -> Wdfa:
    """Zero-weight machine for {0,1}^length over an alphabet containing 0 and 1."""
    bits = [alphabet.index["0"], alphabet.index["1"]]
    arcs = tuple({b: (0, q + 1) for b in bits} for q in range(length)) + ({},)
    return Wdfa(alphabet, arcs, 0, {length: 0})


def paths_machine(g: Digraph, alphabet: Alphabet) -> Wdfa:
    """All paths of ``g``: state 0 is the start, state j means 'last vertex was j'."""
    arcs = [{alphabet.index[str(v)]: (0, v) for v in g.vertices}]
    for j in g.vertices:
        arcs.append({alphabet.index[str(k)]: (0, k) for (i, k) in sorted(g.edges) if i == j})
    return Wdfa(alphabet, tuple(arcs), 0, {q: 0 for q in range(g.order + 1)})


def digit_alphabet(r: int) -> Alphabet:
    return Alphabet(tuple(str(i) for i in range(1, r + 1)))


def gen_hamilton(g: Digraph, bounded: bool = False) -> ReductionInstance:
    """Early_j constraints whose attested set is the length-r paths of ``g``."""
    r = g.order
    if r < 1:
        raise InputError("graph needs at least one vertex")
    sigma = digit_alphabet(r)
    gen = automata.build_straightline(sigma, r)
    named = []
    for j in g.vertices:
        c = make_early(str(j), sigma)
        if bounded:
            c = automata.intersect(c, gen)
        named.append((f"Early{j}", c))
    x_set = automata.trim(automata.intersect(paths_machine(g, sigma), gen))
    return ReductionInstance(
        Kind.HAMILTON_RANKSSET,
        grammar=_single(sigma, gen, named),
        ssets=[AttestedSurfaceSet(EPSILON, x_set)],
        oracle="brute_hamilton",
    )


def _need_vars(phi: CnfFormula) -> int:
    r = phi.max_var
    if r == 0 or not phi.clauses:
        raise InputError("formula needs at least one clause and one variable")
    return r


def msa_grammar(phi: CnfFormula) -> GrammarSpec:
    r = _need_vars(phi)
    named = [(f"D{i}'", make_guarded_clause(c, r)) for i, c in enumerate(phi.clauses, 1)]
    named += [(f"not_v{i}", make_bit(i, "0", r)) for i in range(1, r + 1)]
    return _single(BITS, automata.build_straightline(BITS, r), named)


def gen_msa(phi: CnfFormula) -> ReductionInstance:
    """Guarded clauses then negative bits; the MSA is the tail of the optimal vector."""
    g = msa_grammar(phi)
    return ReductionInstance(Kind.MSA_OPTVAL, grammar=g, ranking=tuple(range(g.n)), oracle="brute_msa")


def msa_from_vector(vector, m: int) -> str:
    return "".join(str(v) for v in vector[m:])


def _clause_constraints(phi: CnfFormula, num_vars: int, alphabet=BITS, prefix="D"):
    return [(f"{prefix}{i}", make_clause_constraint(c, num_vars, alphabet)) for i, c in enumerate(phi.clauses, 1)]


def gen_cnfsat_beatable(phi: CnfFormula) -> ReductionInstance:
    r = _need_vars(phi)
    g = _single(BITS, automata.build_straightline(BITS, r), _clause_constraints(phi, r))
    m = len(phi.clauses)
    return ReductionInstance(
        Kind.CNFSAT_BEATABLE,
        grammar=g,
        ranking=tuple(range(m)),
        thresholds={"k": (0,) * (m - 1) + (1,)},
        oracle="brute_sat",
    )


def with_empty_weight(c: Wdfa, weight: int) -> Wdfa:
    """Copy of ``c`` that weighs the empty string at ``weight`` and everything else as before."""
    arcs = list(c.arcs) + [dict(c.arcs[c.start])]
    finals = dict(c.finals)
    finals[len(arcs) - 1] = weight
    return Wdfa(c.alphabet, tuple(arcs), len(arcs) - 1, finals)


def gen_cnfsat_check(phi: CnfFormula) -> ReductionInstance:
    """Adds the empty candidate, satisfying every clause constraint but the last."""
    r = _need_vars(phi)
    m = len(phi.clauses)
    named = [
        (name, with_empty_weight(c, 0 if i < m else 1))
        for i, (name, c) in enumerate(_clause_constraints(phi, r), 1)
    ]
    straight = automata.build_straightline(BITS, r)
    gen = Wdfa(BITS, straight.arcs, 0, {**straight.finals, 0: 0})
    g = _single(BITS, gen, named)
    return ReductionInstance(
        Kind.CNFSAT_CHECK,
        grammar=g,
        ranking=tuple(range(m)),
        thresholds={"k": (0,) * (m - 1) + (1,)},
        forms=[AttestedForm(EPSILON, "")],
        oracle="brute_sat (answer = not check)",
    )


def rename(phi: CnfFormula, offset: int, num_vars: int) -> CnfFormula:
    clauses = tuple(tuple(l + offset if l > 0 else l - offset for l in c) for c in phi.clauses)
    return CnfFormula(num_vars, clauses)


def gen_satunsat_range(phi: CnfFormula, psi: CnfFormula) -> ReductionInstance:
    """Clause constraints of phi, then of psi on disjoint variables; a Range query."""
    r = _need_vars(phi)
    s = r + _need_vars(psi)
    length = r + s
    psi2 = rename(psi, r, length)
    used_phi = {abs(l) for c in phi.clauses for l in c}
    used_psi = {abs(l) for c in psi2.clauses for l in c}
    if used_phi & used_psi:
        raise AssertionError("variable ranges overlap after renaming")
    phi2 = CnfFormula(length, phi.clauses)
    named = _clause_constraints(phi2, length) + _clause_constraints(psi2, length, prefix="E")
    g = _single(BITS, automata.build_straightline(BITS, length), named)
    m, m2 = len(phi.clauses), len(psi.clauses)
    return ReductionInstance(
        Kind.SATUNSAT_RANGE,
        grammar=g,
        ranking=tuple(range(m + m2)),
        thresholds={
            "k1": (0,) * m + (0,) * (m2 - 1) + (1,),
            "k2": (0,) * m + (1,) * m2,
        },
        oracle="brute_sat(phi) and not brute_sat(psi)",
    )


def exempt_on_symbol(c: Wdfa, symbol: str) -> Wdfa:
    """Copy of an exit-charging constraint that is satisfied on any string containing ``symbol``."""
    if any(w for row in c.arcs for w, _ in row.values()):
        raise InputError("exemption needs a constraint that charges only on exit")
    sym = c.alphabet.index[symbol]
    sink = c.num_states
    arcs = [{s: ((0, sink) if s == sym else arc) for s, arc in row.items()} for row in c.arcs]
    for row in arcs:
        row[sym] = (0, sink)
    arcs.append({s: (0, sink) for s in range(len(c.alphabet))})
    return Wdfa(c.alphabet, tuple(arcs), c.start, {**c.finals, sink: 0})


def gen_qsat2(phi: CnfFormula, r: int) -> ReductionInstance:
    """RankableSSet instance deciding 'exists b1..br, no extension satisfies phi'."""
    s = phi.max_var
    if not phi.clauses:
        raise InputError("formula needs at least one clause")
    if not 0 <= r <= s:
        raise InputError(f"need 0 <= r <= l(phi) = {s}, got r = {r}")
    x_set = automata.concat_symbol(bit_strings(QBITS, r), "2")
    gen = automata.union(bit_strings(QBITS, r + s), x_set)
    named = [
        (name, exempt_on_symbol(c, "2"))
        for name, c in _clause_constraints(phi, s, QBITS)
    ]
    named += [(f"v{i}", make_bit(i, "1", r, QBITS)) for i in range(1, r + 1)]
    named += [(f"not_v{i}", make_bit(i, "0", r, QBITS)) for i in range(1, r + 1)]
    named.append(("notX", make_membership(x_set, complement=True)))
    return ReductionInstance(
        Kind.QSAT2_RANKSSET,
        grammar=_single(QBITS, gen, named),
        ssets=[AttestedSurfaceSet(EPSILON, x_set)],
        oracle="brute_qsat2",
    )


def gen_msalsb(phi: CnfFormula) -> ReductionInstance:
    """MSA grammar plus both the OptValZ query and an attested set of candidates ending in 0."""
    g = msa_grammar(phi)
    r = phi.max_var
    x_set = automata.concat_symbol(automata.build_straightline(BITS, r - 1), "0")
    return ReductionInstance(
        Kind.MSALSB_CHECKSSET,
        grammar=g,
        ranking=tuple(range(g.n)),
        ssets=[AttestedSurfaceSet(EPSILON, x_set)],
        oracle="brute_msa(phi)[-1] == '0'",
    )


def gen_permutation_grammar(r: int) -> GrammarSpec:
    """Project_1..Project_r and Short over strings of length <= r+1."""
    if r < 1:
        raise InputError("r must be at least 1")
    sigma = digit_alphabet(r)
    straight = automata.build_straightline(sigma, r + 1)
    gen = Wdfa(sigma, straight.arcs, 0, {q: 0 for q in range(r + 2)})
    named = [(f"Project{j}", make_project(str(j), sigma)) for j in range(1, r + 1)]
    named.append(("Short", make_short(sigma)))
    return _single(sigma, gen, named)


def gen_orderable(g: Digraph) -> ReductionInstance:
    from .derivational import gen_orderable_hamilton

    return ReductionInstance(Kind.HAMILTON_ORDERABLE, rules=gen_orderable_hamilton(g), oracle="brute_hamilton")

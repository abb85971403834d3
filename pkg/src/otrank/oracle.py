"""Naive reference solvers used to cross-check the real algorithms.

Nothing here shares logic with the solvers beyond ``weigh`` and
``enumerate_accepted``.  Every oracle has a hard size cap and raises instead
of silently truncating.
"""
from __future__ import annotations

from itertools import permutations, product
from typing import Optional, Sequence

from . import automata
from .constraints import CnfFormula
from .errors import ResourceLimitError

MAX_CANDIDATES = 100_000
MAX_RANK_CONSTRAINTS = 7
MAX_VARS = 20
MAX_VERTICES = 8


def _cap(what: str, value: int, limit: int):
    if value > limit:
        raise ResourceLimitError(f"oracle cap: {what} = {value} exceeds {limit}")


def candidates(g, u: str, max_len: int) -> list[str]:
    found = automata.enumerate_accepted(g.candidates(u), MAX_CANDIDATES + 1, max_len)
    _cap("candidates", len(found), MAX_CANDIDATES)
    return [x for x, _ in found]


def brute_opt(g, ranking: Sequence[int], u: str, max_len: int):
    """(minimal violation vector, set of candidates attaining it) by full enumeration."""
    cands = candidates(g, u, max_len)
    if not cands:
        raise ValueError(f"no candidates for {u!r} up to length {max_len}")
    machines = g.constraints.machines
    scored = [(tuple(automata.weigh(machines[c], x) for c in ranking), x) for x in cands]
    best = min(v for v, _ in scored)
    return best, {x for v, x in scored if v == best}


def brute_rank(g, forms=(), ssets=(), max_len: int = 8):
    """Try every ranking.  Returns ``(found, witness ranking or None)``."""
    n = g.n
    _cap("constraints", n, MAX_RANK_CONSTRAINTS)
    cands = {u: candidates(g, u, max_len) for u in {x.underlying for x in forms} | {x.underlying for x in ssets}}
    table = {u: {x: g.constraints.evaluate(x) for x in xs} for u, xs in cands.items()}
    for ranking in permutations(range(n)):

        def argmin(u):
            vecs = {x: tuple(v[c] for c in ranking) for x, v in table[u].items()}
            best = min(vecs.values())
            return {x for x, v in vecs.items() if v == best}

        optimal = {u: argmin(u) for u in table}
        if not all(x.surface in optimal[x.underlying] for x in forms):
            continue
        if not all(any(automata.accepts(x.set, y) for y in optimal[x.underlying]) for x in ssets):
            continue
        return True, ranking
    return False, None


def brute_sat(phi: CnfFormula) -> Optional[str]:
    """Lexicographically least satisfying bitstring over v1..v_{max_var}, or ``None``."""
    k = phi.max_var
    _cap("variables", k, MAX_VARS)
    for bits in product("01", repeat=k):
        b = "".join(bits)
        if all(any((b[abs(l) - 1] == "1") == (l > 0) for l in c) for c in phi.clauses):
            return b
    return None


def brute_msa(phi: CnfFormula) -> str:
    b = brute_sat(phi)
    return b if b is not None else "1" * phi.max_var


def brute_qsat2(phi: CnfFormula, r: int) -> bool:
    """exists b1..br such that no b_{r+1}..b_s makes phi true."""
    s = phi.max_var
    _cap("variables", s, MAX_VARS)

    def sat(bits):
        return all(any((bits[abs(l) - 1] == "1") == (l > 0) for l in c) for c in phi.clauses)

    for head in product("01", repeat=r):
        if not any(sat(head + tail) for tail in product("01", repeat=s - r)):
            return True
    return False


def brute_hamilton(graph) -> bool:
    return brute_hamilton_path(graph) is not None


def brute_hamilton_path(graph) -> Optional[tuple[int, ...]]:
    r = graph.order
    _cap("vertices", r, MAX_VERTICES)
    for perm in permutations(range(1, r + 1)):
        if all((perm[i], perm[i + 1]) in graph.edges for i in range(r - 1)):
            return perm
    return None

"""Constraint ranking: mark-data compilation and the ranking learners.

Pairwise learners (``rcd``, ``cd``) work on a compiled ``FormulaSet``.  The
grammar-driven learners (``rcd_all``, ``edcd``, ``mrcd``, ``rank_sset``,
``rankable_single``) call generation directly.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Sequence

from . import automata
from .constraints import ConstraintSet, is_binary
from .errors import InputError, ResourceLimitError
from .generate import (
    AttestedForm,
    AttestedSurfaceSet,
    GrammarSpec,
    check,
    check_sset,
    opt,
    winnow,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Clause:
    """One mark-data pair: some member must outrank every loser."""

    members: frozenset[int]
    losers: frozenset[int]


@dataclass
class RankResult:
    ranking: Optional[tuple[int, ...]]
    diagnostics: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.ranking is not None


def inconsistent(**diag) -> RankResult:
    return RankResult(None, diag)


def compile_clause(cs: ConstraintSet, x: str, y: str) -> Clause:
    """Clause for winner ``x`` over competitor ``y``."""
    vx, vy = cs.evaluate(x), cs.evaluate(y)
    return Clause(
        frozenset(c for c in range(len(cs)) if vx[c] < vy[c]),
        frozenset(c for c in range(len(cs)) if vx[c] > vy[c]),
    )


class FormulaSet:
    """Compiled clauses with the per-constraint bookkeeping RCD needs.

    ``phi[c]`` lists the ids of clauses conjoined in the formula for c (c is
    one of their losers); ``mentions[c]`` lists the clauses in which c is a
    disjunct.  Clauses without losers constrain nothing and are dropped.
    """

    def __init__(self, n: int, clauses: Iterable[Clause], names: Optional[Sequence[str]] = None):
        self.n = n
        self.names = tuple(names) if names is not None else tuple(f"C{i}" for i in range(n))
        self.clauses = [c for c in clauses if c.losers]
        # one shared int object per id keeps RCD's inner loop cache-friendly
        ids = list(range(max(n, len(self.clauses))))
        self.phi: list[list[int]] = [[] for _ in range(n)]
        self.mentions: list[list[int]] = [[] for _ in range(n)]
        self.has_empty_clause = False
        for i, cl in enumerate(self.clauses):
            if not cl.members:
                self.has_empty_clause = True
            for c in sorted(cl.members):
                if not 0 <= c < n:
                    raise InputError(f"constraint id {c} out of range")
                self.mentions[c].append(ids[i])
            for c in sorted(cl.losers):
                if not 0 <= c < n:
                    raise InputError(f"constraint id {c} out of range")
                self.phi[c].append(ids[i])
        self.losers = [tuple(ids[d] for d in sorted(cl.losers)) for cl in self.clauses]

    @property
    def size(self) -> int:
        """Sum of clause sizes plus conjunct counts."""
        return sum(len(c.members) for c in self.clauses) + sum(len(p) for p in self.phi)

    def satisfied_by(self, ranking: Sequence[int]) -> bool:
        pos = {c: i for i, c in enumerate(ranking)}
        if len(pos) != self.n:
            return False
        for cl in self.clauses:
            top = min((pos[m] for m in cl.members), default=self.n)
            if any(pos[l] < top for l in cl.losers):
                return False
        return True


def compile_formulas(cs: ConstraintSet, pairs: Iterable[tuple[str, str]]) -> FormulaSet:
    return FormulaSet(len(cs), (compile_clause(cs, x, y) for x, y in pairs), cs.names)


def rcd(f: FormulaSet) -> RankResult:
    """Recursive Constraint Demotion in O(M + n).

    Each undominated constraint is dequeued once; each clause it mentions is
    eliminated at most once, decrementing the conjunct counters of that
    clause's losers.
    """
    if f.has_empty_clause:
        return inconsistent(reason="empty clause")
    count = [len(p) for p in f.phi]
    back: list = list(f.losers)
    queue = deque(c for c in range(f.n) if count[c] == 0)
    order = []
    eliminated = visits = 0
    while queue:
        c = queue.popleft()
        order.append(c)
        for i in f.mentions[c]:
            losers = back[i]
            if losers is None:
                continue
            back[i] = None
            eliminated += 1
            for d in losers:
                visits += 1
                count[d] -= 1
                if count[d] == 0:
                    queue.append(d)
    diag = {"clauses_eliminated": eliminated, "backpointer_visits": visits}
    if len(order) < f.n:
        return inconsistent(**diag)
    return RankResult(tuple(order), diag)


def totalize(strata: Sequence[int]) -> tuple[int, ...]:
    """Ranking ordered by stratum, then constraint id."""
    return tuple(sorted(range(len(strata)), key=lambda c: (strata[c], c)))


def compact(strata: Sequence[int]) -> list[int]:
    levels = {s: i for i, s in enumerate(sorted(set(strata)))}
    return [levels[s] for s in strata]


def _demote(strata: list[int], clause: Clause) -> int:
    """Process one clause; returns the number of demotions."""
    top = min(strata[m] for m in clause.members)
    moved = 0
    for loser in clause.losers:
        if strata[loser] <= top:
            strata[loser] = top + 1
            moved += 1
    return moved


def cd(f: FormulaSet) -> RankResult:
    """Constraint Demotion: repeated passes over all clauses until nothing moves."""
    n = f.n
    strata = [0] * n
    passes = demotions = 0
    while True:
        passes += 1
        if passes > n + 1:
            return inconsistent(passes=passes - 1, demotions=demotions, reason="pass cap")
        moved = 0
        for cl in f.clauses:
            if not cl.members:
                return inconsistent(passes=passes, demotions=demotions, reason="empty clause")
            moved += _demote(strata, cl)
            # strata never exceed n-1 on consistent data when starting from all-zero
            if max(strata[l] for l in cl.losers) >= n:
                return inconsistent(passes=passes, demotions=demotions, reason="sank below n strata")
        demotions += moved
        if not moved:
            break
    ranking = totalize(strata)
    assert f.satisfied_by(ranking)
    return RankResult(ranking, {"passes": passes, "demotions": demotions, "strata": compact(strata)})


# -- learners that consult generation --------------------------------------


def _validate_forms(g: GrammarSpec, forms: Sequence[AttestedForm]):
    for x in forms:
        if not automata.accepts(g.candidates(x.underlying), x.surface):
            raise InputError(f"{x.surface!r} is not a candidate for {x.underlying!r}")


def _loser(g: GrammarSpec, ranking, x: AttestedForm, state_limit, enum_limit):
    """A canonical optimum beating ``x``, or ``None`` if ``x`` is optimal."""
    best_set = opt(g, ranking, x.underlying, state_limit)
    if automata.accepts(best_set, x.surface):
        return None
    y = automata.shortest_string(best_set)
    if enum_limit is not None and len(g.alphabet.encode(y)) > enum_limit:
        raise ResourceLimitError(f"witness longer than enumeration limit {enum_limit}")
    return y


def _verify_forms(g, ranking, forms, state_limit):
    for x in forms:
        assert check(g, ranking, x, state_limit), f"returned ranking fails on {x}"


def edcd(
    g: GrammarSpec,
    forms: Sequence[AttestedForm],
    r0: Optional[Sequence[int]] = None,
    state_limit: Optional[int] = None,
    enum_limit: Optional[int] = None,
) -> RankResult:
    """Error-Driven Constraint Demotion over a fixed list of attested forms.

    ``r0`` is an initial ranking (read as one constraint per stratum); by
    default every constraint starts in the top stratum.  Errors beyond n^2
    stop the run as inconsistent.
    """
    _validate_forms(g, forms)
    n = g.n
    strata = [0] * n
    if r0 is not None:
        for pos, c in enumerate(r0):
            strata[c] = pos
    cap = n * n
    errors = passes = 0
    while True:
        passes += 1
        erred = False
        for x in forms:
            ranking = totalize(strata)
            y = _loser(g, ranking, x, state_limit, enum_limit)
            if y is None:
                continue
            erred = True
            errors += 1
            if errors > cap:
                log.info("edcd: error cap %d exceeded", cap)
                return inconsistent(errors=errors, passes=passes, cap_hit=True)
            clause = compile_clause(g.constraints, x.surface, y)
            if not clause.members:
                return inconsistent(errors=errors, passes=passes, reason=f"{x.surface!r} is never optimal")
            _demote(strata, clause)
        if not erred:
            break
    ranking = totalize(strata)
    _verify_forms(g, ranking, forms, state_limit)
    return RankResult(ranking, {"errors": errors, "passes": passes, "strata": compact(strata)})


def mrcd(
    g: GrammarSpec,
    forms: Sequence[AttestedForm],
    state_limit: Optional[int] = None,
    enum_limit: Optional[int] = None,
) -> RankResult:
    """Like ``edcd`` but re-runs ``rcd`` over every clause collected so far."""
    _validate_forms(g, forms)
    clauses: list[Clause] = []
    ranking = tuple(range(g.n))
    passes = 0
    while True:
        passes += 1
        erred = False
        for x in forms:
            y = _loser(g, ranking, x, state_limit, enum_limit)
            if y is None:
                continue
            erred = True
            clauses.append(compile_clause(g.constraints, x.surface, y))
            res = rcd(FormulaSet(g.n, clauses))
            if not res.consistent:
                return inconsistent(errors=len(clauses), passes=passes)
            ranking = res.ranking
        if not erred:
            break
    _verify_forms(g, ranking, forms, state_limit)
    return RankResult(ranking, {"errors": len(clauses), "passes": passes})


def rcd_all(g: GrammarSpec, forms: Sequence[AttestedForm], state_limit: Optional[int] = None) -> RankResult:
    """Greedy top-down ranking against all competitors.

    The winnowed candidate set of each underlying form is cached, so testing
    a constraint at depth k costs one winnowing step per form rather than k.
    """
    _validate_forms(g, forms)
    groups: dict[str, list[str]] = {}
    for x in forms:
        groups.setdefault(x.underlying, []).append(x.surface)
    cache = {u: automata.trim(g.candidates(u)) for u in groups}
    remaining = list(range(g.n))
    order = []
    steps = 0
    while remaining:
        for c in remaining:
            trial = {}
            for u, surfaces in groups.items():
                steps += 1
                winnowed, _ = winnow(cache[u], g.constraints.machines[c], state_limit)
                if not all(automata.accepts(winnowed, s) for s in surfaces):
                    break
                trial[u] = winnowed
            else:
                break
        else:
            return inconsistent(depth=len(order), winnow_steps=steps)
        cache.update(trial)
        order.append(c)
        remaining.remove(c)
    ranking = tuple(order)
    _verify_forms(g, ranking, forms, state_limit)
    return RankResult(ranking, {"winnow_steps": steps})


def _complement(a):
    from .constraints import make_membership

    return automata.restrict_to_weight_zero(make_membership(a, complement=True))


def _finite_choices(members, limit: int):
    """Per-set member lists if every set is finite and all combinations fit ``limit``."""
    out = []
    total = 1
    for m in members:
        if not automata.is_finite(m):
            return None
        words = [w for w, _ in automata.enumerate_accepted(m, limit + 1, m.num_states)]
        total *= len(words)
        if total > limit:
            return None
        out.append(words)
    return out


def _rank_by_choice(g, ssets, choices, state_limit) -> RankResult:
    tried = 0
    for combo in product(*choices):
        tried += 1
        forms = [AttestedForm(x.underlying, w) for x, w in zip(ssets, combo)]
        res = rcd_all(g, forms, state_limit)
        if res.consistent:
            return RankResult(res.ranking, {"strategy": "enumerate", "choices_tried": tried})
    return inconsistent(strategy="enumerate", choices_tried=tried)


def rank_sset(
    g: GrammarSpec,
    ssets: Sequence[AttestedSurfaceSet],
    state_limit: Optional[int] = None,
    memo: bool = True,
    strategy: str = "auto",
    choice_limit: int = 256,
) -> RankResult:
    """Search for a ranking under which every attested set has an optimal member.

    An attested set containing no candidate makes the answer "no" outright.

    ``enumerate`` (the ``auto`` choice when every set of attested candidates
    is finite with at most ``choice_limit`` combinations) tries each choice
    of one member per set and asks ``rcd_all`` whether that choice is
    rankable.  The answer is yes iff some choice is.

    ``search`` backtracks over ranking prefixes.  A prefix is abandoned as
    soon as some winnowed candidate set misses its attested set: later
    constraints only shrink the survivors.  Two exact reductions keep the
    tree small.  A constraint that is constant on every current survivor
    set can be ranked next without branching.  When every survivor set
    already lies inside its attested set, any completion works.  With
    ``memo``, failed nodes are remembered by remaining constraints plus
    canonical survivor languages.
    """
    if strategy not in ("auto", "search", "enumerate"):
        raise InputError(f"unknown strategy {strategy!r}")
    machines = g.constraints.machines
    targets = []
    members = []
    for x in ssets:
        gen = g.candidates(x.underlying)
        both = automata.trim(automata.intersect(gen, x.set, state_limit))
        if automata.is_empty(both):
            # no member is even a candidate, so none can be optimal
            return inconsistent(nodes=0, reason=f"attested set for {x.underlying!r} has no candidate")
        members.append(both)
        targets.append((automata.trim(gen), x.set, _complement(x.set)))
    if strategy != "search":
        choices = _finite_choices(members, choice_limit)
        if choices is not None:
            res = _rank_by_choice(g, ssets, choices, state_limit)
            if res.consistent:
                for x in ssets:
                    assert check_sset(g, res.ranking, x, state_limit), "returned ranking fails an attested set"
            return res
        if strategy == "enumerate":
            raise ResourceLimitError(f"attested sets are infinite or exceed {choice_limit} combinations")
    stats = {"strategy": "search", "nodes": 0, "memo_hits": 0, "pruned": 0}
    failed: set = set()

    def inside(w, outside):
        return automata.is_empty(automata.intersect(w, outside, state_limit))

    def search(sets, remaining: tuple[int, ...], keys):
        stats["nodes"] += 1
        if all(inside(w, t[2]) for w, t in zip(sets, targets)):
            return remaining
        key = (remaining, keys)
        if memo and key in failed:
            stats["memo_hits"] += 1
            return None
        placed = []
        branches = []
        for c in remaining:
            new_sets = [winnow(w, machines[c], state_limit)[0] for w in sets]
            new_keys = tuple(automata.language_key(w) for w in new_sets)
            if new_keys == keys:
                placed.append(c)
            else:
                branches.append((c, new_sets, new_keys))
        rest = tuple(c for c in remaining if c not in placed)
        if not rest:
            return tuple(placed)
        for c, new_sets, new_keys in branches:
            if any(automata.is_empty(automata.intersect(w, t[1], state_limit)) for w, t in zip(new_sets, targets)):
                stats["pruned"] += 1
                continue
            tail = search(new_sets, tuple(d for d in rest if d != c), new_keys)
            if tail is not None:
                return tuple(placed) + (c,) + tail
        if memo:
            failed.add(key)
        return None

    start = [t[0] for t in targets]
    found = search(start, tuple(range(g.n)), tuple(automata.language_key(w) for w in start))
    if found is None:
        return inconsistent(**stats)
    ranking = tuple(found)
    for x in ssets:
        assert check_sset(g, ranking, x, state_limit), "returned ranking fails an attested set"
    return RankResult(ranking, stats)


def rankable_single(g: GrammarSpec, x: AttestedForm, state_limit: Optional[int] = None) -> RankResult:
    """Rankability of one attested form under {0,1}-valued constraints.

    ``x`` can be made optimal iff no candidate satisfies a proper superset of
    the constraints ``x`` satisfies; then ranking those constraints first
    works.
    """
    gen = g.candidates(x.underlying)
    if not automata.accepts(gen, x.surface):
        raise InputError(f"{x.surface!r} is not a candidate for {x.underlying!r}")
    machines = g.constraints.machines
    for name, m in zip(g.constraints.names, machines):
        if not is_binary(m, gen):
            raise InputError(f"constraint {name} is not {{0,1}}-valued on the candidates")
    values = g.constraints.evaluate(x.surface)
    satisfied = [c for c in range(g.n) if values[c] == 0]
    base = automata.trim(gen)
    for c in satisfied:
        base = automata.intersect(base, automata.restrict_to_weight_zero(machines[c]), state_limit)
    for c in range(g.n):
        if values[c] == 0:
            continue
        extra = automata.intersect(base, automata.restrict_to_weight_zero(machines[c]), state_limit)
        if not automata.is_empty(extra):
            return inconsistent(bounded_by=automata.shortest_string(extra))
    ranking = tuple(satisfied) + tuple(c for c in range(g.n) if values[c] != 0)
    assert check(g, ranking, x, state_limit)
    return RankResult(ranking, {})

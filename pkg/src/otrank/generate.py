"""OT generation by successive winnowing, and the decision problems built on it."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import automata
from .automata import INF, Alphabet, Wdfa
from .constraints import ConstraintSet
from .errors import InputError

EPSILON = ""  # the underlying form written <eps> in files


@dataclass(frozen=True)
class GrammarSpec:
    alphabet: Alphabet
    lexicon: tuple[str, ...]
    gen: dict[str, Wdfa]
    constraints: ConstraintSet

    def __post_init__(self):
        object.__setattr__(self, "lexicon", tuple(self.lexicon))
        if len(set(self.lexicon)) != len(self.lexicon):
            raise InputError("duplicate underlying forms in lexicon")
        if set(self.lexicon) != set(self.gen):
            raise InputError("lexicon and gen keys differ")
        for u, m in self.gen.items():
            if m.alphabet != self.alphabet:
                raise InputError(f"gen({u!r}) uses a different alphabet")
            if not m.is_zero_weight:
                raise InputError(f"gen({u!r}) must be zero-weight")
        if self.constraints.alphabet != self.alphabet:
            raise InputError("constraint alphabet differs from grammar alphabet")

    @property
    def n(self) -> int:
        return len(self.constraints)

    def candidates(self, u: str) -> Wdfa:
        if u not in self.gen:
            raise InputError(f"unknown underlying form {u!r}")
        return self.gen[u]

    def ranking(self, names: Sequence[str]) -> tuple[int, ...]:
        """Constraint ids for a sequence of constraint names."""
        return check_ranking(self, [self.constraints.index(nm) for nm in names])

    def vector(self, ranking: Sequence[int], x: str) -> tuple:
        machines = self.constraints.machines
        return tuple(automata.weigh(machines[c], x) for c in ranking)


@dataclass(frozen=True)
class AttestedForm:
    underlying: str
    surface: str


@dataclass(frozen=True)
class AttestedSurfaceSet:
    underlying: str
    set: Wdfa = field(compare=True)


def check_ranking(g: GrammarSpec, ranking: Sequence[int]) -> tuple[int, ...]:
    ranking = tuple(ranking)
    if sorted(ranking) != list(range(g.n)):
        raise InputError(f"ranking {ranking} is not a permutation of 0..{g.n - 1}")
    return ranking


def winnow(cur: Wdfa, constraint: Wdfa, state_limit: Optional[int] = None):
    """One winnowing step: ``(optimal subset, minimal value)``."""
    prod = automata.intersect(cur, constraint, state_limit)
    best = automata.min_accepting_weight(prod)
    if best == INF:
        raise InputError("a constraint rejects every surviving candidate")
    return automata.prune_to_optimal(prod), best


def _winnow_all(g: GrammarSpec, ranking, u: str, state_limit=None):
    ranking = check_ranking(g, ranking)
    cur = g.candidates(u)
    if automata.is_empty(cur):
        raise InputError(f"gen({u!r}) is empty")
    cur = automata.trim(cur)
    values = []
    for c in ranking:
        cur, best = winnow(cur, g.constraints.machines[c], state_limit)
        values.append(best)
    return cur, tuple(values)


def opt(g: GrammarSpec, ranking: Sequence[int], u: str, state_limit: Optional[int] = None) -> Wdfa:
    """Zero-weight machine for the optimal candidates of ``u`` under ``ranking``."""
    return _winnow_all(g, ranking, u, state_limit)[0]


def opt_val(g: GrammarSpec, ranking: Sequence[int], u: str, state_limit: Optional[int] = None) -> tuple:
    """The violation vector shared by all optimal candidates, in ranking order."""
    return _winnow_all(g, ranking, u, state_limit)[1]


def opt_val_z(g, ranking, u, state_limit=None) -> bool:
    vec = opt_val(g, ranking, u, state_limit)
    if not vec:
        raise InputError("opt_val_z needs at least one constraint")
    return vec[-1] == 0


def _vector_arg(g: GrammarSpec, k) -> tuple:
    k = tuple(k)
    if len(k) != g.n:
        raise InputError(f"threshold vector has length {len(k)}, expected {g.n}")
    return k


def beatable(g, ranking, u, k, state_limit=None) -> bool:
    return opt_val(g, ranking, u, state_limit) < _vector_arg(g, k)


def best(g, ranking, u, k, state_limit=None) -> bool:
    return opt_val(g, ranking, u, state_limit) == _vector_arg(g, k)


def in_range(g, ranking, u, k1, k2, state_limit=None) -> bool:
    """Is the optimal vector between ``k1`` and ``k2`` inclusive?"""
    k1, k2 = _vector_arg(g, k1), _vector_arg(g, k2)
    return k1 <= opt_val(g, ranking, u, state_limit) <= k2


def check(g: GrammarSpec, ranking: Sequence[int], x: AttestedForm, state_limit=None) -> bool:
    """Is the attested form optimal under ``ranking``?"""
    if not automata.accepts(g.candidates(x.underlying), x.surface):
        raise InputError(f"{x.surface!r} is not a candidate for {x.underlying!r}")
    ranking = check_ranking(g, ranking)
    return not beatable(g, ranking, x.underlying, g.vector(ranking, x.surface), state_limit)


def check_sset(g: GrammarSpec, ranking: Sequence[int], x: AttestedSurfaceSet, state_limit=None) -> bool:
    """Is some member of the attested surface set optimal under ``ranking``?"""
    gen = g.candidates(x.underlying)
    if automata.is_empty(automata.intersect(gen, x.set, state_limit)):
        raise InputError(f"attested set for {x.underlying!r} contains no candidate")
    best_set = opt(g, ranking, x.underlying, state_limit)
    return not automata.is_empty(automata.intersect(best_set, x.set, state_limit))


def sset_witness(g, ranking, x: AttestedSurfaceSet, state_limit=None) -> Optional[str]:
    """Shortest optimal member of the attested set, if any."""
    best_set = opt(g, ranking, x.underlying, state_limit)
    return automata.shortest_string(automata.intersect(best_set, x.set, state_limit))

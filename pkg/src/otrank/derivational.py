"""Derivational grammars: ordered rewrite rules and the rule-ordering search.

Strings are tuples of symbol names; ``str`` arguments are split into
characters and results are joined back.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from . import automata
from .automata import Wdfa
from .errors import InputError

Symbols = tuple[str, ...]


class RuleKind(enum.Enum):
    MOVE = "move"
    ACCEPT = "accept"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Rule:
    name: str
    kind: RuleKind
    j: Optional[int] = None
    order: int = 0
    edges: frozenset = frozenset()
    fn: Optional[Callable[[Symbols], Symbols]] = field(default=None, compare=False)

    def __call__(self, s: Symbols) -> Symbols:
        if self.kind is RuleKind.MOVE:
            return _move(self, s)
        if self.kind is RuleKind.ACCEPT:
            return () if s and s[0] == "#" else s
        return self.fn(s)


def _is_permutation(s: Symbols, order: int) -> bool:
    return len(s) == order + 2 and set(s) == {"#", "0", *map(str, range(1, order + 1))}


def _move(rule: Rule, s: Symbols) -> Symbols:
    # alpha j beta # gamma i  ->  alpha beta # gamma i j   when i = 0 or i -> j is an edge
    if not _is_permutation(s, rule.order):
        return s
    j = str(rule.j)
    hash_at = s.index("#")
    if j not in s[:hash_at] or hash_at == len(s) - 1:
        return s
    last = s[-1]
    if last != "0" and (int(last), rule.j) not in rule.edges:
        return s
    return tuple(c for c in s if c != j) + (j,)


def make_move(j: int, graph) -> Rule:
    if not 1 <= j <= graph.order:
        raise InputError(f"vertex {j} outside 1..{graph.order}")
    return Rule(f"Move{j}", RuleKind.MOVE, j=j, order=graph.order, edges=graph.edges)


def make_accept() -> Rule:
    return Rule("Accept", RuleKind.ACCEPT)


def make_custom(name: str, fn: Callable[[Symbols], Symbols]) -> Rule:
    return Rule(name, RuleKind.CUSTOM, fn=fn)


def _as_symbols(u: Union[str, Sequence[str]]) -> Symbols:
    return tuple(u) if isinstance(u, str) else tuple(u)


def apply_sequence(seq: Sequence[Rule], u: Union[str, Sequence[str]]):
    """Apply ``seq`` left to right: the first rule acts first."""
    s = _as_symbols(u)
    for rule in seq:
        s = rule(s)
    return "".join(s) if isinstance(u, str) else s


Target = Union[str, Symbols, Wdfa]


@dataclass
class RuleOrderInstance:
    rule_pool: list[Rule]
    n: int
    pairs: list[tuple[Symbols, Target]]

    def __post_init__(self):
        if self.n < 0:
            raise InputError("sequence length must be nonnegative")
        self.pairs = [(_as_symbols(u), x) for u, x in self.pairs]


def _member(s: Symbols, target: Target) -> bool:
    if isinstance(target, Wdfa):
        if any(c not in target.alphabet.index for c in s):
            return False
        return automata.accepts(target, list(s))
    return s == _as_symbols(target)


def orderable_sset(inst: RuleOrderInstance) -> Optional[list[Rule]]:
    """First rule sequence (in pool order) mapping every u_i into X_i, or ``None``.

    Depth-first over pool^n; a (depth, current strings) state that already
    failed is not revisited.
    """
    targets = [x for _, x in inst.pairs]
    failed: set = set()

    def search(strings: tuple, depth: int):
        if depth == inst.n:
            return [] if all(_member(s, x) for s, x in zip(strings, targets)) else None
        key = (depth, strings)
        if key in failed:
            return None
        for rule in inst.rule_pool:
            tail = search(tuple(rule(s) for s in strings), depth + 1)
            if tail is not None:
                return [rule] + tail
        failed.add(key)
        return None

    return search(tuple(u for u, _ in inst.pairs), 0)


def gen_orderable_hamilton(graph) -> RuleOrderInstance:
    """Move_1..Move_r plus Accept, length r+1, single pair (12..r#0, empty)."""
    r = graph.order
    pool = [make_move(j, graph) for j in range(1, r + 1)] + [make_accept()]
    u = tuple(str(j) for j in range(1, r + 1)) + ("#", "0")
    return RuleOrderInstance(pool, r + 1, [(u, ())])

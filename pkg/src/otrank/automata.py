"""Deterministic weighted finite automata over a shared symbol table.

A ``Wdfa`` is a dense-state machine: ``arcs[q]`` maps a symbol id to a
``(weight, target)`` pair, and ``finals`` maps each final state to its exit
weight.  The weight of an accepted string is the sum of the arc weights on
its (unique) run plus the exit weight of the state it ends in.  Unaccepted
strings weigh ``INF``.

Candidate strings are plain ``str`` values.  When every symbol of the
alphabet is a single character the string is just the concatenation of the
symbols; otherwise symbols are joined with ``"."``.
"""
from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional, Sequence

from .errors import InputError, ResourceLimitError

INF = math.inf

Arc = tuple[int, int]  # (weight, target)


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        index = {}
        for i, s in enumerate(symbols):
            if not s or any(ch.isspace() for ch in s):
                raise InputError(f"bad symbol name {s!r}")
            if s in index:
                raise InputError(f"duplicate symbol {s!r}")
            index[s] = i
        object.__setattr__(self, "index", index)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    @property
    def single_char(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)

    def encode(self, x: str | Sequence[str]) -> tuple[int, ...]:
        """Map a candidate string (or a sequence of symbol names) to symbol ids."""
        if isinstance(x, str):
            if self.single_char:
                names = list(x)
            else:
                names = x.split(".") if x else []
        else:
            names = list(x)
        try:
            return tuple(self.index[s] for s in names)
        except KeyError as exc:
            raise InputError(f"symbol {exc.args[0]!r} not in alphabet") from None

    def decode(self, ids: Iterable[int]) -> str:
        sep = "" if self.single_char else "."
        return sep.join(self.symbols[i] for i in ids)


@dataclass(frozen=True)
class Wdfa:
    alphabet: Alphabet
    arcs: tuple[dict[int, Arc], ...]
    start: int
    finals: dict[int, int]

    def __post_init__(self):
        arcs = tuple(self.arcs)
        object.__setattr__(self, "arcs", arcs)
        n = len(arcs)
        if not 0 <= self.start < n:
            raise InputError(f"start state {self.start} out of range (0..{n - 1})")
        for q, w in self.finals.items():
            if not 0 <= q < n:
                raise InputError(f"final state {q} out of range")
            if w < 0:
                raise InputError("negative exit weight")
        k = len(self.alphabet)
        for row in arcs:
            for sym, (w, t) in row.items():
                if not 0 <= sym < k:
                    raise InputError(f"symbol id {sym} out of range")
                if w < 0:
                    raise InputError("negative arc weight")
                if not 0 <= t < n:
                    raise InputError(f"arc target {t} out of range")

    @property
    def num_states(self) -> int:
        return len(self.arcs)

    @property
    def num_arcs(self) -> int:
        return sum(len(row) for row in self.arcs)

    @property
    def is_zero_weight(self) -> bool:
        return all(w == 0 for w in self.finals.values()) and all(
            w == 0 for row in self.arcs for w, _ in row.values()
        )

    def __repr__(self):
        return (
            f"Wdfa(states={self.num_states}, arcs={self.num_arcs}, "
            f"finals={len(self.finals)}, |alphabet|={len(self.alphabet)})"
        )


def _check_limit(count: int, state_limit: Optional[int]):
    if state_limit is not None and count > state_limit:
        raise ResourceLimitError(f"automaton exceeded state limit {state_limit}")


def build(
    alphabet: Alphabet,
    start_key: Hashable,
    step: Callable[[Hashable, int], Optional[tuple[int, Hashable]]],
    final_weight: Callable[[Hashable], Optional[int]],
    state_limit: Optional[int] = None,
) -> Wdfa:
    """Materialize the machine reachable from ``start_key`` under ``step``.

    ``step(key, sym)`` returns ``(weight, next_key)`` or ``None`` for no arc;
    ``final_weight(key)`` returns an exit weight or ``None`` for non-final.
    States are numbered in breadth-first, symbol-id order.
    """
    ids = {start_key: 0}
    keys = [start_key]
    arcs: list[dict[int, Arc]] = []
    finals: dict[int, int] = {}
    i = 0
    while i < len(keys):
        key = keys[i]
        row = {}
        for sym in range(len(alphabet)):
            res = step(key, sym)
            if res is None:
                continue
            w, nxt = res
            j = ids.get(nxt)
            if j is None:
                j = ids[nxt] = len(keys)
                keys.append(nxt)
                _check_limit(len(keys), state_limit)
            row[sym] = (w, j)
        arcs.append(row)
        fw = final_weight(key)
        if fw is not None:
            finals[i] = fw
        i += 1
    return Wdfa(alphabet, tuple(arcs), 0, finals)


def empty_machine(alphabet: Alphabet) -> Wdfa:
    return Wdfa(alphabet, ({},), 0, {})


def universal(alphabet: Alphabet) -> Wdfa:
    """Zero-weight machine accepting every string."""
    return Wdfa(alphabet, ({s: (0, 0) for s in range(len(alphabet))},), 0, {0: 0})


def build_straightline(alphabet: Alphabet, r: int) -> Wdfa:
    """Zero-weight machine accepting exactly the strings of length ``r``."""
    if r < 0:
        raise InputError("length must be nonnegative")
    k = len(alphabet)
    arcs = tuple({s: (0, q + 1) for s in range(k)} for q in range(r)) + ({},)
    return Wdfa(alphabet, arcs, 0, {r: 0})


def from_strings(alphabet: Alphabet, strings: Iterable[str]) -> Wdfa:
    """Zero-weight trie accepting a finite set of strings."""
    arcs: list[dict[int, Arc]] = [{}]
    finals: dict[int, int] = {}
    for x in strings:
        q = 0
        for sym in alphabet.encode(x):
            nxt = arcs[q].get(sym)
            if nxt is None:
                arcs.append({})
                arcs[q][sym] = (0, len(arcs) - 1)
                q = len(arcs) - 1
            else:
                q = nxt[1]
        finals[q] = 0
    return trim(Wdfa(alphabet, tuple(arcs), 0, finals))


# -- evaluation ------------------------------------------------------------


def run(a: Wdfa, x: str | Sequence[str]):
    """Return ``(state, accumulated weight)`` after reading ``x``, or ``None``."""
    q, total = a.start, 0
    for sym in a.alphabet.encode(x):
        arc = a.arcs[q].get(sym)
        if arc is None:
            return None
        total += arc[0]
        q = arc[1]
    return q, total


def weigh(a: Wdfa, x: str | Sequence[str]):
    """Total weight of the accepting path for ``x``; ``INF`` if ``x`` is rejected."""
    res = run(a, x)
    if res is None or res[0] not in a.finals:
        return INF
    return res[1] + a.finals[res[0]]


def accepts(a: Wdfa, x: str | Sequence[str]) -> bool:
    res = run(a, x)
    return res is not None and res[0] in a.finals


# -- structure -------------------------------------------------------------


def _reachable(a: Wdfa) -> list[bool]:
    seen = [False] * a.num_states
    seen[a.start] = True
    stack = [a.start]
    while stack:
        q = stack.pop()
        for _, t in a.arcs[q].values():
            if not seen[t]:
                seen[t] = True
                stack.append(t)
    return seen


def _reverse(a: Wdfa) -> list[list[tuple[int, int]]]:
    rev: list[list[tuple[int, int]]] = [[] for _ in range(a.num_states)]
    for p, row in enumerate(a.arcs):
        for w, t in row.values():
            rev[t].append((p, w))
    return rev


def _coreachable(a: Wdfa) -> list[bool]:
    rev = _reverse(a)
    seen = [False] * a.num_states
    stack = list(a.finals)
    for q in stack:
        seen[q] = True
    while stack:
        q = stack.pop()
        for p, _ in rev[q]:
            if not seen[p]:
                seen[p] = True
                stack.append(p)
    return seen


def is_empty(a: Wdfa) -> bool:
    reach = _reachable(a)
    return not any(reach[q] for q in a.finals)


def trim(a: Wdfa) -> Wdfa:
    """Drop states that are unreachable or cannot reach a final state.

    Surviving states are renumbered breadth-first from the start state.
    """
    reach = _reachable(a)
    co = _coreachable(a)
    if not co[a.start]:
        return empty_machine(a.alphabet)
    useful = [r and c for r, c in zip(reach, co)]
    new_id = {a.start: 0}
    order = [a.start]
    i = 0
    while i < len(order):
        q = order[i]
        for sym in sorted(a.arcs[q]):
            t = a.arcs[q][sym][1]
            if useful[t] and t not in new_id:
                new_id[t] = len(order)
                order.append(t)
        i += 1
    arcs = tuple(
        {s: (w, new_id[t]) for s, (w, t) in sorted(a.arcs[q].items()) if t in new_id}
        for q in order
    )
    finals = {new_id[q]: w for q, w in a.finals.items() if q in new_id}
    return Wdfa(a.alphabet, arcs, 0, finals)


def intersect(a: Wdfa, b: Wdfa, state_limit: Optional[int] = None) -> Wdfa:
    """Weighted product: accepts L(a) & L(b); weights add.  Only reachable pairs are built."""
    if a.alphabet != b.alphabet:
        raise InputError("alphabet mismatch in intersect")
    ids = {(a.start, b.start): 0}
    pairs = [(a.start, b.start)]
    arcs: list[dict[int, Arc]] = []
    finals: dict[int, int] = {}
    i = 0
    while i < len(pairs):
        p, q = pairs[i]
        brow = b.arcs[q]
        row = {}
        for sym, (wa, ta) in a.arcs[p].items():
            arc_b = brow.get(sym)
            if arc_b is None:
                continue
            wb, tb = arc_b
            j = ids.get((ta, tb))
            if j is None:
                j = ids[(ta, tb)] = len(pairs)
                pairs.append((ta, tb))
                _check_limit(len(pairs), state_limit)
            row[sym] = (wa + wb, j)
        arcs.append(row)
        if p in a.finals and q in b.finals:
            finals[i] = a.finals[p] + b.finals[q]
        i += 1
    return Wdfa(a.alphabet, tuple(arcs), 0, finals)


def union(a: Wdfa, b: Wdfa, state_limit: Optional[int] = None) -> Wdfa:
    """Union of two zero-weight machines (as sets)."""
    if a.alphabet != b.alphabet:
        raise InputError("alphabet mismatch in union")
    if not (a.is_zero_weight and b.is_zero_weight):
        raise InputError("union is defined for zero-weight machines only")

    def step(key, sym):
        p, q = key
        tp = a.arcs[p].get(sym) if p is not None else None
        tq = b.arcs[q].get(sym) if q is not None else None
        if tp is None and tq is None:
            return None
        return 0, (tp[1] if tp else None, tq[1] if tq else None)

    def final(key):
        p, q = key
        return 0 if p in a.finals or q in b.finals else None

    return trim(build(a.alphabet, (a.start, b.start), step, final, state_limit))


def concat_symbol(a: Wdfa, symbol: str) -> Wdfa:
    """Zero-weight machine for L(a) followed by one ``symbol``."""
    if not a.is_zero_weight:
        raise InputError("concat_symbol expects a zero-weight machine")
    sym = a.alphabet.index[symbol]
    n = a.num_states
    arcs = [dict(row) for row in a.arcs] + [{}]
    for q in a.finals:
        if sym in arcs[q]:
            raise InputError("concat_symbol would make the machine nondeterministic")
        arcs[q][sym] = (0, n)
    return trim(Wdfa(a.alphabet, tuple(arcs), a.start, {n: 0}))


def zero_weight_copy(a: Wdfa) -> Wdfa:
    """Same language, all weights zero."""
    arcs = tuple({s: (0, t) for s, (_, t) in row.items()} for row in a.arcs)
    return Wdfa(a.alphabet, arcs, a.start, {q: 0 for q in a.finals})


def restrict_to_weight_zero(a: Wdfa) -> Wdfa:
    """Zero-weight machine accepting exactly the strings that ``a`` weighs at 0."""
    arcs = tuple({s: (0, t) for s, (w, t) in row.items() if w == 0} for row in a.arcs)
    finals = {q: 0 for q, w in a.finals.items() if w == 0}
    return trim(Wdfa(a.alphabet, arcs, a.start, finals))


# -- shortest paths --------------------------------------------------------


def _forward_dist(a: Wdfa) -> list:
    dist = [INF] * a.num_states
    dist[a.start] = 0
    heap = [(0, a.start)]
    while heap:
        d, q = heapq.heappop(heap)
        if d > dist[q]:
            continue
        for w, t in a.arcs[q].values():
            nd = d + w
            if nd < dist[t]:
                dist[t] = nd
                heapq.heappush(heap, (nd, t))
    return dist


def _backward_dist(a: Wdfa) -> list:
    rev = _reverse(a)
    dist = [INF] * a.num_states
    heap = []
    for q, w in a.finals.items():
        dist[q] = w
        heap.append((w, q))
    heapq.heapify(heap)
    while heap:
        d, q = heapq.heappop(heap)
        if d > dist[q]:
            continue
        for p, w in rev[q]:
            nd = d + w
            if nd < dist[p]:
                dist[p] = nd
                heapq.heappush(heap, (nd, p))
    return dist


def min_accepting_weight(a: Wdfa):
    """Least weight of any accepted string, ``INF`` for the empty language."""
    dist = _forward_dist(a)
    return min((dist[q] + w for q, w in a.finals.items()), default=INF)


def prune_to_optimal(a: Wdfa) -> Wdfa:
    """Zero-weight machine for the strings on which ``a`` attains its minimum.

    An arc p -sym/w-> q survives iff dist(start, p) + w + dist(q, final) equals
    the optimum; a final state survives iff its own distance plus exit weight
    does.  Every surviving start-to-final path is therefore optimal.
    """
    fwd = _forward_dist(a)
    best = min((fwd[q] + w for q, w in a.finals.items()), default=INF)
    if best == INF:
        raise InputError("prune_to_optimal needs a nonempty language")
    bwd = _backward_dist(a)
    arcs = tuple(
        {s: (0, t) for s, (w, t) in row.items() if fwd[p] + w + bwd[t] == best}
        for p, row in enumerate(a.arcs)
    )
    finals = {q: 0 for q, w in a.finals.items() if fwd[q] + w == best}
    return trim(Wdfa(a.alphabet, arcs, a.start, finals))


def is_finite(a: Wdfa) -> bool:
    """True iff the accepted language is finite (no cycle among useful states)."""
    a = trim(a)
    # Kahn's algorithm: every state is removed iff the graph is acyclic
    indeg = [0] * a.num_states
    for row in a.arcs:
        for _, t in row.values():
            indeg[t] += 1
    queue = deque(q for q in range(a.num_states) if indeg[q] == 0)
    seen = 0
    while queue:
        q = queue.popleft()
        seen += 1
        for _, t in a.arcs[q].values():
            indeg[t] -= 1
            if indeg[t] == 0:
                queue.append(t)
    return seen == a.num_states


def _steps_to_final(a: Wdfa) -> list:
    rev = _reverse(a)
    steps = [INF] * a.num_states
    queue = deque()
    for q in a.finals:
        steps[q] = 0
        queue.append(q)
    while queue:
        q = queue.popleft()
        for p, _ in rev[q]:
            if steps[p] == INF:
                steps[p] = steps[q] + 1
                queue.append(p)
    return steps


def shortest_string(a: Wdfa) -> Optional[str]:
    """The length-then-lexicographically least accepted string, or ``None``."""
    steps = _steps_to_final(a)
    q = a.start
    if steps[q] == INF:
        return None
    out = []
    while steps[q] > 0:
        for sym in sorted(a.arcs[q]):
            t = a.arcs[q][sym][1]
            if steps[t] == steps[q] - 1:
                out.append(sym)
                q = t
                break
    return a.alphabet.decode(out)


def enumerate_accepted(a: Wdfa, max_count: int, max_len: int) -> list[tuple[str, object]]:
    """Accepted strings of length <= ``max_len`` with their weights.

    Output is in length-then-lexicographic (symbol id) order and truncated to
    ``max_count`` entries.
    """
    if max_count < 0 or max_len < 0:
        raise InputError("max_count and max_len must be nonnegative")
    out: list[tuple[str, object]] = []
    if max_count == 0:
        return out
    steps = _steps_to_final(a)
    frontier = [((), a.start, 0)] if steps[a.start] <= max_len else []
    length = 0
    while frontier and length <= max_len:
        for ids, q, w in frontier:
            if q in a.finals:
                out.append((a.alphabet.decode(ids), w + a.finals[q]))
                if len(out) >= max_count:
                    return out
        if length == max_len:
            break
        remaining = max_len - length - 1
        nxt = []
        for ids, q, w in frontier:
            row = a.arcs[q]
            for sym in sorted(row):
                aw, t = row[sym]
                if steps[t] <= remaining:
                    nxt.append((ids + (sym,), t, w + aw))
        frontier = nxt
        length += 1
    return out


def language_key(a: Wdfa) -> tuple:
    """Canonical structural key of the trimmed, Moore-minimized machine.

    Equal keys imply equal weighted behaviour.  For zero-weight machines the
    key is a complete language invariant.
    """
    a = trim(a)
    n = a.num_states
    block = [("F", a.finals[q]) if q in a.finals else ("N",) for q in range(n)]
    labels = {b: i for i, b in enumerate(sorted(set(block)))}
    part = [labels[b] for b in block]
    count = len(labels)
    while True:
        sigs = [
            (part[q],) + tuple((s, w, part[t]) for s, (w, t) in sorted(a.arcs[q].items()))
            for q in range(n)
        ]
        labels = {}
        new = [labels.setdefault(sig, len(labels)) for sig in sigs]
        if len(labels) == count:
            break
        part, count = new, len(labels)
    # renumber blocks breadth-first from the start block
    order = {part[a.start]: 0}
    reps = {}
    for q in range(n):
        reps.setdefault(part[q], q)
    queue = deque([part[a.start]])
    rows = []
    while queue:
        blk = queue.popleft()
        q = reps[blk]
        row = []
        for s, (w, t) in sorted(a.arcs[q].items()):
            tb = part[t]
            if tb not in order:
                order[tb] = len(order)
                queue.append(tb)
            row.append((s, w, order[tb]))
        rows.append((a.finals.get(q), tuple(row)))
    return tuple(rows)


# -- text format -----------------------------------------------------------


def write_alphabet(alphabet: Alphabet) -> str:
    return "".join(s + "\n" for s in alphabet.symbols)


def read_alphabet(text: str) -> Alphabet:
    return Alphabet(tuple(line.strip() for line in text.splitlines() if line.strip()))


def to_text(a: Wdfa) -> str:
    lines = [f"wdfa {a.num_states} {a.start}"]
    for q in sorted(a.finals):
        w = a.finals[q]
        lines.append(f"final {q}" if w == 0 else f"final {q} {w}")
    for q, row in enumerate(a.arcs):
        for sym in sorted(row):
            w, t = row[sym]
            lines.append(f"arc {q} {a.alphabet.symbols[sym]} {w} {t}")
    return "\n".join(lines) + "\n"


def from_text(text: str, alphabet: Alphabet) -> Wdfa:
    header = None
    finals: dict[int, int] = {}
    arcs: list[dict[int, Arc]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        try:
            if parts[0] == "wdfa":
                if header is not None:
                    raise InputError("duplicate wdfa header")
                header = (int(parts[1]), int(parts[2]))
                arcs = [{} for _ in range(header[0])]
            elif header is None:
                raise InputError("missing wdfa header")
            elif parts[0] == "final":
                finals[int(parts[1])] = int(parts[2]) if len(parts) > 2 else 0
            elif parts[0] == "arc":
                src, sym_name, w, dst = int(parts[1]), parts[2], int(parts[3]), int(parts[4])
                if sym_name not in alphabet.index:
                    raise InputError(f"unknown symbol {sym_name!r}")
                sym = alphabet.index[sym_name]
                if not 0 <= src < header[0]:
                    raise InputError(f"arc source {src} out of range")
                if sym in arcs[src]:
                    raise InputError(f"nondeterministic arcs from state {src} on {sym_name!r}")
                arcs[src][sym] = (w, dst)
            else:
                raise InputError(f"unknown directive {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise InputError(f"line {lineno}: {exc}") from None
            raise InputError(f"line {lineno}: malformed line {line!r}") from None
    if header is None:
        raise InputError("missing wdfa header")
    return Wdfa(alphabet, tuple(arcs), header[1], finals)

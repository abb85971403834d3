"""Constraint families as weighted automata, plus CNF formulas.

Every constructor returns a total machine over its alphabet: symbols a
constraint does not inspect are free loops.  Binary constraints whose verdict
depends on the whole string (clauses, membership) charge through exit
weights, so the empty string can be judged too.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import automata
from .automata import Alphabet, Wdfa
from .errors import InputError

BITS = Alphabet(("0", "1"))


@dataclass(frozen=True)
class ConstraintSet:
    alphabet: Alphabet
    names: tuple[str, ...]
    machines: tuple[Wdfa, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "machines", tuple(self.machines))
        if len(self.names) != len(self.machines):
            raise InputError("names and machines differ in length")
        if len(set(self.names)) != len(self.names):
            raise InputError("constraint names must be unique")
        for m in self.machines:
            if m.alphabet != self.alphabet:
                raise InputError("constraint alphabet differs from the set's alphabet")

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown constraint {name!r}") from None

    def evaluate(self, x: str) -> tuple:
        """Violation counts of ``x`` in constraint-id order."""
        return tuple(automata.weigh(m, x) for m in self.machines)


@dataclass(frozen=True)
class CnfFormula:
    """CNF over v_1..v_num_vars; literals are DIMACS-style signed ints."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        clauses = tuple(tuple(c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        for c in clauses:
            if not c:
                raise InputError("empty clause")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise InputError(f"literal {lit} outside v1..v{self.num_vars}")

    @property
    def max_var(self) -> int:
        """Largest variable index actually used."""
        return max((abs(lit) for c in self.clauses for lit in c), default=0)

    def satisfied_by(self, bits: str) -> bool:
        return all(clause_satisfied(c, bits) for c in self.clauses)


def clause_satisfied(clause: Sequence[int], bits: str) -> bool:
    for lit in clause:
        v = abs(lit)
        if v <= len(bits) and bits[v - 1] == ("1" if lit > 0 else "0"):
            return True
    return False


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = None
    clauses, current = [], []
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in "c%":
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InputError(f"bad problem line {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if current:
                    clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if num_vars is None:
        num_vars = max((abs(l) for c in clauses for l in c), default=0)
    return CnfFormula(num_vars, tuple(clauses))


def to_dimacs(phi: CnfFormula) -> str:
    lines = [f"p cnf {phi.num_vars} {len(phi.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in phi.clauses]
    return "\n".join(lines) + "\n"


def _sym(alphabet: Alphabet, name: str) -> int:
    try:
        return alphabet.index[name]
    except KeyError:
        raise InputError(f"symbol {name!r} not in alphabet") from None


def make_early(j: str, alphabet: Alphabet) -> Wdfa:
    """Charges 1 for every symbol read before the first ``j``."""
    jj = _sym(alphabet, j)
    k = len(alphabet)
    before = {s: (0, 1) if s == jj else (1, 0) for s in range(k)}
    after = {s: (0, 1) for s in range(k)}
    return Wdfa(alphabet, (before, after), 0, {0: 0, 1: 0})


def make_bit(i: int, want: str, length: int, alphabet: Alphabet = BITS) -> Wdfa:
    """Charges 1 when bit ``i`` (1-based) is a bit other than ``want``.

    Strings shorter than ``i`` and non-bit symbols in position ``i`` are free.
    """
    if not 1 <= i <= length:
        raise InputError(f"bit index {i} outside 1..{length}")
    if want not in ("0", "1"):
        raise InputError("want must be '0' or '1'")
    k = len(alphabet)
    other = alphabet.index.get("1" if want == "0" else "0")
    arcs = [{s: (0, q + 1) for s in range(k)} for q in range(i - 1)]
    arcs.append({s: (1 if s == other else 0, i) for s in range(k)})
    arcs.append({s: (0, i) for s in range(k)})
    return Wdfa(alphabet, tuple(arcs), 0, {q: 0 for q in range(i + 1)})


def make_clause_constraint(clause: Sequence[int], num_vars: int, alphabet: Alphabet = BITS) -> Wdfa:
    """0 on bitstrings satisfying the clause, 1 otherwise (at most num_vars + 2 states)."""
    if not clause:
        raise InputError("empty clause")
    last = max(abs(l) for l in clause)
    if last > num_vars:
        raise InputError(f"clause mentions v{last} beyond v{num_vars}")
    want = {}
    for lit in clause:
        want.setdefault(abs(lit), set()).add("1" if lit > 0 else "0")
    k = len(alphabet)

    def step(key, sym):
        if key == "sat":
            return 0, "sat"
        name = alphabet.symbols[sym]
        pos = key + 1
        if name in want.get(pos, ()):
            return 0, "sat"
        return 0, min(pos, last)

    def final(key):
        return 0 if key == "sat" else 1

    return automata.build(alphabet, 0, step, final)


def make_guarded_clause(clause: Sequence[int], r: int, alphabet: Alphabet = BITS) -> Wdfa:
    """Clause constraint for ``clause OR (v1 AND ... AND vr)``: also 0 on exactly 1^r."""
    if not clause:
        raise InputError("empty clause")
    last = max(abs(l) for l in clause)
    if last > r:
        raise InputError(f"clause mentions v{last} beyond v{r}")
    want = {}
    for lit in clause:
        want.setdefault(abs(lit), set()).add("1" if lit > 0 else "0")

    # key: "sat" | ("ones", pos) for a 1^pos prefix | ("no", pos) otherwise
    def step(key, sym):
        if key == "sat":
            return 0, "sat"
        name = alphabet.symbols[sym]
        kind, pos = key
        pos += 1
        if name in want.get(pos, ()):
            return 0, "sat"
        if kind == "ones" and pos <= r and name == "1":
            return 0, ("ones", pos)
        return 0, ("no", min(pos, last))

    def final(key):
        if key == "sat" or key == ("ones", r):
            return 0
        return 1

    return automata.build(alphabet, ("ones", 0), step, final)


def make_project(j: str, alphabet: Alphabet) -> Wdfa:
    """0 if ``j`` occurs in the string, else 1."""
    jj = _sym(alphabet, j)
    k = len(alphabet)
    before = {s: (0, 1 if s == jj else 0) for s in range(k)}
    after = {s: (0, 1) for s in range(k)}
    return Wdfa(alphabet, (before, after), 0, {0: 1, 1: 0})


def make_short(alphabet: Alphabet) -> Wdfa:
    """Charges 1 per symbol."""
    return Wdfa(alphabet, ({s: (1, 0) for s in range(len(alphabet))},), 0, {0: 0})


def make_membership(x_set: Wdfa, complement: bool = False) -> Wdfa:
    """0 on members of ``x_set`` (on non-members if ``complement``), 1 elsewhere."""
    if not x_set.is_zero_weight:
        raise InputError("membership constraint needs a zero-weight set machine")
    k = len(x_set.alphabet)
    dead = x_set.num_states
    arcs = [
        {s: (0, row[s][1]) if s in row else (0, dead) for s in range(k)} for row in x_set.arcs
    ]
    arcs.append({s: (0, dead) for s in range(k)})
    finals = {}
    for q in range(dead + 1):
        inside = q in x_set.finals
        finals[q] = 0 if inside != complement else 1
    return Wdfa(x_set.alphabet, tuple(arcs), x_set.start, finals)


def is_binary(c: Wdfa, domain: Wdfa | None = None) -> bool:
    """True iff ``c`` takes values in {0, 1} on every accepted string of ``domain``."""
    m = c if domain is None else automata.intersect(domain, c)

    # track accumulated weight capped at 2
    def step(key, sym):
        q, acc = key
        arc = m.arcs[q].get(sym)
        if arc is None:
            return None
        return 0, (arc[1], min(2, acc + arc[0]))

    def final(key):
        q, acc = key
        if q in m.finals and acc + m.finals[q] >= 2:
            return 0
        return None

    bad = automata.build(m.alphabet, (m.start, 0), step, final)
    return automata.is_empty(bad)


def constraint_set(alphabet: Alphabet, named: Iterable[tuple[str, Wdfa]]) -> ConstraintSet:
    named = list(named)
    return ConstraintSet(alphabet, tuple(n for n, _ in named), tuple(m for _, m in named))

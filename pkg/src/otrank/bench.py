"""Timing harness for the RCD linear-time claim."""
from __future__ import annotations

import gc
import random
import time
from dataclasses import dataclass

from .rank import Clause, FormulaSet, rcd

DEFAULT_SIZES = (2048, 4096, 8192, 16384)


def random_formula_set(
    n: int,
    m: int,
    rng: random.Random,
    consistent: bool = True,
    max_members: int = 3,
    max_losers: int = 3,
) -> FormulaSet:
    """``m`` random clauses over ``n`` constraints.

    With ``consistent`` a hidden ranking is drawn and every loser is placed
    below the clause's best member, so the hidden ranking satisfies all
    clauses.  Otherwise members and losers are drawn independently.
    """
    if n < 2:
        return FormulaSet(n, [])
    hidden = list(range(n))
    rng.shuffle(hidden)
    pos = {c: i for i, c in enumerate(hidden)}
    clauses = []
    for _ in range(m):
        k = rng.randint(1, min(max_members, n - 1))
        members = set(rng.sample(range(n), k))
        top = min(pos[c] for c in members) if consistent else -1
        if top == n - 1:
            continue
        losers = set()
        # rejection sampling keeps generation O(1) per clause
        for _ in range(rng.randint(1, max_losers)):
            c = hidden[rng.randint(top + 1, n - 1)]
            if c not in members:
                losers.add(c)
        if losers:
            clauses.append(Clause(frozenset(members), frozenset(losers)))
    return FormulaSet(n, clauses)


@dataclass
class ScalingRow:
    n: int
    clauses: int
    size: int
    seconds: float

    @property
    def per_unit(self) -> float:
        return self.seconds / max(1, self.size + self.n)


def _timed(instances) -> float:
    gc_was_on = gc.isenabled()
    gc.disable()
    try:
        t0 = time.perf_counter()
        for f in instances:
            res = rcd(f)
            if f.n >= 2 and not res.consistent:
                raise AssertionError("synthesized instance should be consistent")
        return time.perf_counter() - t0
    finally:
        if gc_was_on:
            gc.enable()


def bench_rcd_scaling(sizes=DEFAULT_SIZES, clauses_per_constraint: int = 4, repeats: int = 5, seed: int = 0):
    """Time ``rcd`` on random consistent instances with M proportional to n.

    Smaller sizes get several distinct instances so that every timed sample
    does about the same total work.  Sizes are timed round-robin, so a slow
    stretch on a shared machine hits all of them alike, and each size keeps
    its fastest sample.  The collector is paused while timing, as ``timeit``
    does.
    """
    rng = random.Random(seed)
    largest = max(sizes, default=0)
    batches = []
    for n in sizes:
        copies = max(1, largest // n) if n else 1
        batches.append([random_formula_set(n, clauses_per_constraint * n, rng) for _ in range(copies)])
    best = [float("inf")] * len(batches)
    for _ in range(repeats):
        for k, batch in enumerate(batches):
            best[k] = min(best[k], _timed(batch) / len(batch))
    rows = []
    for n, batch, t in zip(sizes, batches, best):
        clauses = sum(len(f.clauses) for f in batch) // len(batch)
        size = sum(f.size for f in batch) // len(batch)
        rows.append(ScalingRow(n, clauses, size, t))
    return rows


def scaling_ratio(rows) -> float:
    """Per-unit time of the largest instance over that of the smallest."""
    rows = [r for r in rows if r.n > 0]
    if len(rows) < 2:
        return 1.0
    lo, hi = min(rows, key=lambda r: r.n), max(rows, key=lambda r: r.n)
    return hi.per_unit / lo.per_unit if lo.per_unit > 0 else 1.0


def rows_tsv(rows) -> str:
    lines = ["n\tclauses\tM\tseconds\tseconds_per_unit"]
    lines += [f"{r.n}\t{r.clauses}\t{r.size}\t{r.seconds:.6f}\t{r.per_unit:.3e}" for r in rows]
    return "\n".join(lines) + "\n"

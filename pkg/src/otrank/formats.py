"""Line-based file formats for grammars, data files and reduction bundles.

See docs/formats.md for the grammar of each file.  The empty string (as an
underlying form or a surface) is written ``<eps>``.
"""
from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable, Union

from . import automata
from .automata import Alphabet, Wdfa
from .constraints import constraint_set
from .derivational import RuleOrderInstance, make_accept, make_move
from .errors import InputError
from .generate import AttestedForm, AttestedSurfaceSet, GrammarSpec
from .reductions import Digraph, Kind, ReductionInstance

EPS = "<eps>"
PathLike = Union[str, os.PathLike]


def token(s: str) -> str:
    return EPS if s == "" else s


def untoken(t: str) -> str:
    return "" if t == EPS else t


def _lines(path: Path):
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if parts and not parts[0].startswith("#"):
            yield lineno, parts


def _bad(path, lineno, msg):
    return InputError(f"{path}:{lineno}: {msg}")


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in name) or "eps"


def read_wdfa(path: PathLike, alphabet: Alphabet) -> Wdfa:
    path = Path(path)
    try:
        return automata.from_text(path.read_text(), alphabet)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def write_wdfa(path: PathLike, a: Wdfa):
    Path(path).write_text(automata.to_text(a))


# -- grammars --------------------------------------------------------------


def save_grammar(g: GrammarSpec, directory: PathLike) -> Path:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "alphabet.txt").write_text(automata.write_alphabet(g.alphabet))
    lines = ["alphabet alphabet.txt"]
    for i, u in enumerate(g.lexicon):
        fname = f"gen_{i}_{_safe(u)}.wdfa"
        write_wdfa(d / fname, g.gen[u])
        lines.append(f"gen {token(u)} {fname}")
    for i, (name, m) in enumerate(zip(g.constraints.names, g.constraints.machines)):
        fname = f"con_{i}_{_safe(name)}.wdfa"
        write_wdfa(d / fname, m)
        lines.append(f"constraint {name} {fname}")
    (d / "grammar.txt").write_text("\n".join(lines) + "\n")
    return d


def load_grammar(directory: PathLike) -> GrammarSpec:
    d = Path(directory)
    manifest = d / "grammar.txt"
    alphabet = None
    gen, lexicon, named = {}, [], []
    for lineno, parts in _lines(manifest):
        kind = parts[0]
        if kind == "alphabet" and len(parts) == 2:
            try:
                alphabet = automata.read_alphabet((d / parts[1]).read_text())
            except OSError as exc:
                raise _bad(manifest, lineno, f"cannot read alphabet: {exc.strerror}") from None
        elif alphabet is None:
            raise _bad(manifest, lineno, "alphabet line must come first")
        elif kind == "gen" and len(parts) == 3:
            u = untoken(parts[1])
            if u in gen:
                raise _bad(manifest, lineno, f"duplicate underlying form {parts[1]}")
            lexicon.append(u)
            gen[u] = read_wdfa(d / parts[2], alphabet)
        elif kind == "constraint" and len(parts) == 3:
            named.append((parts[1], read_wdfa(d / parts[2], alphabet)))
        else:
            raise _bad(manifest, lineno, f"unrecognized line {' '.join(parts)!r}")
    if alphabet is None:
        raise InputError(f"{manifest}: no alphabet line")
    return GrammarSpec(alphabet, tuple(lexicon), gen, constraint_set(alphabet, named))


# -- data files ------------------------------------------------------------


def read_pairs(path: PathLike) -> list[tuple[str, str, str]]:
    path = Path(path)
    out = []
    for lineno, parts in _lines(path):
        if parts[0] != "pair" or len(parts) != 4:
            raise _bad(path, lineno, "expected 'pair <underlying> <winner> <loser>'")
        out.append(tuple(untoken(p) for p in parts[1:]))
    return out


def write_pairs(path: PathLike, pairs: Iterable[tuple[str, str, str]]):
    Path(path).write_text("".join(f"pair {token(u)} {token(x)} {token(y)}\n" for u, x, y in pairs))


def read_forms(path: PathLike) -> list[AttestedForm]:
    path = Path(path)
    out = []
    for lineno, parts in _lines(path):
        if parts[0] == "form" and len(parts) == 3:
            out.append(AttestedForm(untoken(parts[1]), untoken(parts[2])))
    return out


def write_forms(path: PathLike, forms: Iterable[AttestedForm]):
    Path(path).write_text("".join(f"form {token(x.underlying)} {token(x.surface)}\n" for x in forms))


def read_ssets(path: PathLike, alphabet: Alphabet) -> list[AttestedSurfaceSet]:
    path = Path(path)
    out = []
    for lineno, parts in _lines(path):
        if parts[0] == "sset" and len(parts) == 3:
            out.append(AttestedSurfaceSet(untoken(parts[1]), read_wdfa(path.parent / parts[2], alphabet)))
    return out


def read_graph(path: PathLike) -> Digraph:
    path = Path(path)
    order, edges = None, set()
    for lineno, parts in _lines(path):
        try:
            if parts[0] == "graph" and len(parts) == 2:
                order = int(parts[1])
            elif parts[0] == "edge" and len(parts) == 3:
                edges.add((int(parts[1]), int(parts[2])))
            else:
                raise _bad(path, lineno, "expected 'graph <r>' or 'edge <i> <j>'")
        except ValueError as exc:
            if isinstance(exc, InputError):
                raise
            raise _bad(path, lineno, "vertex numbers must be integers") from None
    if order is None:
        raise InputError(f"{path}: missing 'graph <r>' line")
    return Digraph(order, frozenset(edges))


def graph_text(g: Digraph) -> str:
    return f"graph {g.order}\n" + "".join(f"edge {i} {j}\n" for i, j in sorted(g.edges))


def write_graph(path: PathLike, g: Digraph):
    Path(path).write_text(graph_text(g))


# -- reduction bundles -----------------------------------------------------


def _vec(v) -> str:
    return ",".join(str(x) for x in v)


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise InputError(f"bad vector {text!r}") from None


def save_instance(inst: ReductionInstance, directory: PathLike) -> Path:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    lines = [f"kind {inst.kind.value}"]
    if inst.oracle:
        lines.append(f"oracle {inst.oracle}")
    if inst.grammar is not None:
        save_grammar(inst.grammar, d)
        names = inst.grammar.constraints.names
        if inst.ranking is not None:
            lines.append("ranking " + " ".join(names[c] for c in inst.ranking))
    for label, v in inst.thresholds.items():
        lines.append(f"threshold {label} {_vec(v)}")
    for x in inst.forms:
        lines.append(f"form {token(x.underlying)} {token(x.surface)}")
    for i, x in enumerate(inst.ssets):
        fname = f"sset_{i}.wdfa"
        write_wdfa(d / fname, x.set)
        lines.append(f"sset {token(x.underlying)} {fname}")
    if inst.rules is not None:
        lines += _rules_lines(inst.rules)
    (d / "instance.txt").write_text("\n".join(lines) + "\n")
    return d


def _rules_lines(ri: RuleOrderInstance) -> list[str]:
    lines = []
    moves = [r for r in ri.rule_pool if r.j is not None]
    if moves:
        lines.append(f"graph {moves[0].order}")
        lines += [f"edge {i} {j}" for i, j in sorted(moves[0].edges)]
    for r in ri.rule_pool:
        lines.append(f"rulepool move {r.j}" if r.j is not None else "rulepool accept")
    lines.append(f"length {ri.n}")
    for u, x in ri.pairs:
        lines.append(f"pair {token(''.join(u))} {token(''.join(x))}")
    return lines


def load_instance(directory: PathLike) -> ReductionInstance:
    d = Path(directory)
    path = d / "instance.txt"
    grammar = load_grammar(d) if (d / "grammar.txt").exists() else None
    kind, oracle, ranking = None, "", None
    thresholds, forms, ssets = {}, [], []
    rule_lines = []
    for lineno, parts in _lines(path):
        head = parts[0]
        if head == "kind":
            try:
                kind = Kind(parts[1])
            except (ValueError, IndexError):
                raise _bad(path, lineno, "unknown instance kind") from None
        elif head == "oracle":
            oracle = " ".join(parts[1:])
        elif head == "ranking":
            if grammar is None:
                raise _bad(path, lineno, "ranking without grammar")
            ranking = grammar.ranking(parts[1:])
        elif head == "threshold" and len(parts) == 3:
            thresholds[parts[1]] = parse_vector(parts[2])
        elif head == "form" and len(parts) == 3:
            forms.append(AttestedForm(untoken(parts[1]), untoken(parts[2])))
        elif head == "sset" and len(parts) == 3:
            if grammar is None:
                raise _bad(path, lineno, "sset without grammar")
            ssets.append(AttestedSurfaceSet(untoken(parts[1]), read_wdfa(d / parts[2], grammar.alphabet)))
        elif head in ("graph", "edge", "rulepool", "length", "pair"):
            rule_lines.append((lineno, parts))
        else:
            raise _bad(path, lineno, f"unrecognized line {' '.join(parts)!r}")
    if kind is None:
        raise InputError(f"{path}: missing kind line")
    rules = parse_rule_instance(rule_lines, path, d) if rule_lines else None
    return ReductionInstance(kind, grammar, ranking, thresholds, forms, ssets, rules, oracle)


def parse_rule_instance(rows, path, base: Path) -> RuleOrderInstance:
    order, edges = 0, set()
    pool_spec, n, pairs = [], None, []
    for lineno, parts in rows:
        if parts[0] in ("kind", "oracle"):
            continue
        try:
            if parts[0] == "graph":
                order = int(parts[1])
            elif parts[0] == "edge":
                edges.add((int(parts[1]), int(parts[2])))
            elif parts[0] == "rulepool" and parts[1:2] == ["move"]:
                pool_spec.append(int(parts[2]))
            elif parts[0] == "rulepool" and parts[1:] == ["accept"]:
                pool_spec.append(None)
            elif parts[0] == "length":
                n = int(parts[1])
            elif parts[0] == "pair" and len(parts) == 3:
                pairs.append((parts[1], parts[2]))
            else:
                raise _bad(path, lineno, f"unrecognized line {' '.join(parts)!r}")
        except (ValueError, IndexError) as exc:
            if isinstance(exc, InputError):
                raise
            raise _bad(path, lineno, "malformed line") from None
    if n is None:
        raise InputError(f"{path}: missing 'length <n>' line")
    graph = Digraph(order, frozenset(edges))
    pool = [make_move(j, graph) if j is not None else make_accept() for j in pool_spec]
    resolved = []
    for u, x in pairs:
        target = x
        if x.endswith(".wdfa") and (base / x).exists():
            symbols = Alphabet(("#", "0") + tuple(str(i) for i in graph.vertices))
            target = read_wdfa(base / x, symbols)
        else:
            target = tuple(untoken(x))
        resolved.append((tuple(untoken(u)), target))
    return RuleOrderInstance(pool, n, resolved)


def read_rule_instance(path: PathLike) -> RuleOrderInstance:
    path = Path(path)
    return parse_rule_instance(list(_lines(path)), path, path.parent)

"""Command-line entry point: ``otrank <group> <action> [options]``.

Exit status: 0 yes/success, 1 no/INCONSISTENT, 2 usage or input error,
3 resource limit hit.
"""
from __future__ import annotations

import argparse
import logging
import random
import sys
from pathlib import Path

from . import automata, bench, formats, generate, oracle, rank, reductions
from .constraints import CnfFormula, parse_dimacs
from .derivational import apply_sequence, orderable_sset
from .errors import InputError, ResourceLimitError
from .generate import AttestedForm, AttestedSurfaceSet

YES, NO, USAGE, LIMIT = 0, 1, 2, 3


class Report:
    """Line-oriented output in text or tab-separated form."""

    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def line(self, text: str):
        print(text, file=self.stream)

    def field(self, key: str, value):
        if self.fmt == "tsv":
            self.line(f"{key}\t{value}")
        else:
            self.line(f"{key}: {value}")

    def answer(self, yes: bool) -> int:
        self.field("answer", "yes" if yes else "no") if self.fmt == "tsv" else self.line("yes" if yes else "no")
        return YES if yes else NO


# -- argument helpers ------------------------------------------------------


def _names(text):
    return [t for t in text.replace(",", " ").split() if t]


def _load_bundle(args):
    if not args.grammar:
        raise InputError("--grammar <dir> is required")
    d = Path(args.grammar)
    g = formats.load_grammar(d)
    inst = formats.load_instance(d) if (d / "instance.txt").exists() else None
    return g, inst


def _ranking(args, g, inst):
    if args.ranking:
        given = tuple(g.constraints.index(name) for name in _names(args.ranking))
        if len(set(given)) != len(given):
            raise InputError("ranking repeats a constraint")
        # a prefix is completed with the unnamed constraints in file order
        return given + tuple(c for c in range(g.n) if c not in given)
    if inst is not None and inst.ranking is not None:
        return inst.ranking
    return tuple(range(g.n))


def _underlying(args, g, inst):
    if args.underlying is not None:
        u = formats.untoken(args.underlying)
        if u not in g.gen:
            raise InputError(f"unknown underlying form {args.underlying!r}")
        return u
    if len(g.lexicon) == 1:
        return g.lexicon[0]
    raise InputError("grammar has several underlying forms; pass --underlying")


def _threshold(args, inst, label):
    text = getattr(args, label, None)
    if text is not None:
        return formats.parse_vector(text)
    if inst is not None and label in inst.thresholds:
        return inst.thresholds[label]
    raise InputError(f"--{label} is required")


def _forms(args, g, inst):
    if getattr(args, "form", None):
        u = _underlying(args, g, inst)
        return [AttestedForm(u, formats.untoken(s)) for s in args.form]
    if getattr(args, "data", None):
        return formats.read_forms(args.data)
    if inst is not None and inst.forms:
        return inst.forms
    path = Path(args.grammar) / "forms.txt"
    if path.exists():
        return formats.read_forms(path)
    raise InputError("no attested forms: pass --form or --data")


def _ssets(args, g, inst):
    if getattr(args, "sset", None):
        u = _underlying(args, g, inst)
        return [AttestedSurfaceSet(u, formats.read_wdfa(p, g.alphabet)) for p in args.sset]
    if getattr(args, "data", None):
        return formats.read_ssets(args.data, g.alphabet)
    if inst is not None and inst.ssets:
        return inst.ssets
    raise InputError("no attested surface sets: pass --sset or --data")


def _cnf(path) -> CnfFormula:
    try:
        return parse_dimacs(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _random_cnf(rng, num_vars, num_clauses, width=3) -> CnfFormula:
    clauses = []
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), min(width, num_vars))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(num_vars, tuple(clauses))


def _random_graph(rng, order, p=0.5) -> reductions.Digraph:
    edges = {(i, j) for i in range(1, order + 1) for j in range(1, order + 1) if i != j and rng.random() < p}
    return reductions.Digraph(order, frozenset(edges))


def _bundle_source(args, name):
    # reduction bundles keep their input next to the grammar
    if args.grammar and (Path(args.grammar) / name).exists():
        return Path(args.grammar) / name
    return None


def _formula_arg(args, rng, which="cnf"):
    path = getattr(args, which, None)
    if path:
        return _cnf(path)
    if args.random_vars:
        return _random_cnf(rng, args.random_vars, args.random_clauses or 2 * args.random_vars)
    source = _bundle_source(args, "source.cnf")
    if source:
        return _cnf(source)
    raise InputError(f"pass --{which} <dimacs file> or --random-vars")


def _graph_arg(args, rng):
    if args.graph:
        return formats.read_graph(args.graph)
    if args.random_order:
        return _random_graph(rng, args.random_order)
    source = _bundle_source(args, "source.graph")
    if source:
        return formats.read_graph(source)
    raise InputError("pass --graph <file> or --random-order")


def _print_ranking(rep: Report, res: rank.RankResult, names) -> int:
    if not res.consistent:
        rep.line("INCONSISTENT")
        for k, v in res.diagnostics.items():
            logging.getLogger("otrank").info("%s=%s", k, v)
        return NO
    for pos, c in enumerate(res.ranking, 1):
        rep.line(f"{pos}\t{names[c]}" if rep.fmt == "tsv" else names[c])
    for k, v in res.diagnostics.items():
        logging.getLogger("otrank").info("%s=%s", k, v)
    return YES


# -- subcommands -----------------------------------------------------------


def cmd_generate(args, rep: Report) -> int:
    g, inst = _load_bundle(args)
    ranking = _ranking(args, g, inst)
    sl = args.state_limit
    action = args.action
    if action == "opt":
        u = _underlying(args, g, inst)
        best_set = generate.opt(g, ranking, u, sl)
        limit = args.enum_limit or 20
        found = automata.enumerate_accepted(best_set, limit, max_len=max(64, best_set.num_states))
        for x, _ in found:
            shown = formats.token(x)
            if rep.fmt == "tsv":
                rep.line(f"{shown}\t{','.join(map(str, g.vector(ranking, x)))}")
            else:
                rep.line(shown)
        return YES
    if action == "optval":
        u = _underlying(args, g, inst)
        vec = generate.opt_val(g, ranking, u, sl)
        if rep.fmt == "tsv":
            for c, v in zip(ranking, vec):
                rep.line(f"{g.constraints.names[c]}\t{v}")
        else:
            rep.line(",".join(map(str, vec)))
        return YES
    if action == "optvalz":
        return rep.answer(generate.opt_val_z(g, ranking, _underlying(args, g, inst), sl))
    if action == "beatable":
        return rep.answer(generate.beatable(g, ranking, _underlying(args, g, inst), _threshold(args, inst, "k"), sl))
    if action == "best":
        return rep.answer(generate.best(g, ranking, _underlying(args, g, inst), _threshold(args, inst, "k"), sl))
    if action == "range":
        k1, k2 = _threshold(args, inst, "k1"), _threshold(args, inst, "k2")
        return rep.answer(generate.in_range(g, ranking, _underlying(args, g, inst), k1, k2, sl))
    if action == "check":
        forms = _forms(args, g, inst)
        return rep.answer(all(generate.check(g, ranking, x, sl) for x in forms))
    if action == "checksset":
        ok = True
        for x in _ssets(args, g, inst):
            w = generate.sset_witness(g, ranking, x, sl) if generate.check_sset(g, ranking, x, sl) else None
            if w is None:
                ok = False
            else:
                rep.field("witness", formats.token(w))
        return rep.answer(ok)
    raise InputError(f"unknown action {action}")


def cmd_rank(args, rep: Report) -> int:
    g, inst = _load_bundle(args)
    sl = args.state_limit
    names = g.constraints.names
    action = args.action
    if action in ("rcd", "cd"):
        path = Path(args.data) if args.data else Path(args.grammar) / "pairs.txt"
        triples = formats.read_pairs(path)
        for u, x, y in triples:
            for s in (x, y):
                if u not in g.gen or not automata.accepts(g.gen[u], s):
                    raise InputError(f"{s!r} is not a candidate for {u!r}")
        f = rank.compile_formulas(g.constraints, [(x, y) for _, x, y in triples])
        return _print_ranking(rep, (rank.rcd if action == "rcd" else rank.cd)(f), names)
    if action == "sset":
        res = rank.rank_sset(g, _ssets(args, g, inst), sl, strategy=args.strategy)
        return _print_ranking(rep, res, names)
    forms = _forms(args, g, inst)
    if action == "edcd":
        res = rank.edcd(g, forms, state_limit=sl, enum_limit=args.enum_limit)
    elif action == "mrcd":
        res = rank.mrcd(g, forms, state_limit=sl, enum_limit=args.enum_limit)
    else:
        res = rank.rcd_all(g, forms, state_limit=sl)
    return _print_ranking(rep, res, names)


def cmd_reduce(args, rep: Report) -> int:
    rng = random.Random(args.seed)
    action = args.action
    if not args.out:
        raise InputError("--out <dir> is required")
    if action == "permgrammar":
        g = reductions.gen_permutation_grammar(args.r)
        formats.save_grammar(g, args.out)
        rep.field("wrote", args.out)
        return YES
    if action in ("hamilton", "orderable"):
        graph = _graph_arg(args, rng)
        inst = reductions.gen_hamilton(graph, args.bounded) if action == "hamilton" else reductions.gen_orderable(graph)
        out = Path(args.out)
        formats.save_instance(inst, out)
        formats.write_graph(out / "source.graph", graph)
    else:
        phi = _formula_arg(args, rng)
        if action == "msa":
            inst = reductions.gen_msa(phi)
        elif action == "cnfsat":
            inst = (reductions.gen_cnfsat_check if args.variant == "check" else reductions.gen_cnfsat_beatable)(phi)
        elif action == "satunsat":
            inst = reductions.gen_satunsat_range(phi, _formula_arg(args, rng, "cnf2"))
        elif action == "qsat2":
            inst = reductions.gen_qsat2(phi, args.r)
        else:
            inst = reductions.gen_msalsb(phi)
        out = Path(args.out)
        formats.save_instance(inst, out)
        from .constraints import to_dimacs

        (out / "source.cnf").write_text(to_dimacs(phi))
    rep.field("wrote", args.out)
    rep.field("kind", inst.kind.value)
    if inst.grammar is not None:
        rep.field("constraints", inst.grammar.n)
    return YES


def _rule_instance(path):
    p = Path(path)
    if p.is_dir():
        p = p / "instance.txt"
    return formats.read_rule_instance(p)


def cmd_derive(args, rep: Report) -> int:
    ri = _rule_instance(args.instance)
    if args.action == "order":
        seq = orderable_sset(ri)
        if seq is None:
            rep.line("NONE")
            return NO
        for r in seq:
            rep.line(r.name)
        return YES
    by_name = {r.name: r for r in ri.rule_pool}
    try:
        seq = [by_name[n] for n in _names(args.sequence)]
    except KeyError as exc:
        raise InputError(f"unknown rule {exc.args[0]}") from None
    inputs = [tuple(formats.untoken(args.input))] if args.input is not None else [u for u, _ in ri.pairs]
    for u in inputs:
        out = apply_sequence(seq, u)
        rep.field(formats.token("".join(u)), formats.token("".join(out)))
    return YES


def cmd_oracle(args, rep: Report) -> int:
    rng = random.Random(args.seed)
    action = args.action
    if action == "sat":
        b = oracle.brute_sat(_formula_arg(args, rng))
        if b is not None:
            rep.field("assignment", b)
        return rep.answer(b is not None)
    if action == "msa":
        rep.line(oracle.brute_msa(_formula_arg(args, rng)))
        return YES
    if action == "qsat2":
        return rep.answer(oracle.brute_qsat2(_formula_arg(args, rng), args.r))
    if action == "hamilton":
        path = oracle.brute_hamilton_path(_graph_arg(args, rng))
        if path is not None:
            rep.field("path", " ".join(map(str, path)))
        return rep.answer(path is not None)
    g, inst = _load_bundle(args)
    if action == "opt":
        vec, xs = oracle.brute_opt(g, _ranking(args, g, inst), _underlying(args, g, inst), args.max_len)
        rep.field("optval", ",".join(map(str, vec)))
        for x in sorted(xs):
            rep.line(formats.token(x))
        return YES
    # rank
    forms = _forms(args, g, inst) if not (inst and inst.ssets) and not args.sset else []
    ssets = _ssets(args, g, inst) if not forms else []
    found, ranking = oracle.brute_rank(g, forms, ssets, args.max_len)
    return _print_ranking(rep, rank.RankResult(ranking) if found else rank.inconsistent(), g.constraints.names)


def cmd_bench(args, rep: Report) -> int:
    sizes = tuple(int(s) for s in _names(args.sizes)) if args.sizes else bench.DEFAULT_SIZES
    rows = bench.bench_rcd_scaling(sizes, repeats=args.repeats, seed=args.seed)
    text = bench.rows_tsv(rows)
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "rcd_scaling.tsv").write_text(text)
    print(f"# ratio\t{bench.scaling_ratio(rows):.3f}")
    return YES


# -- parser ----------------------------------------------------------------


def _global_flags(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--grammar", metavar="DIR", default=d(None), help="grammar or instance bundle directory")
    p.add_argument("--out", metavar="DIR", default=d(None), help="output directory")
    p.add_argument("--format", choices=("text", "tsv"), default=d("text"))
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--state-limit", type=int, default=d(None), help="cap on states built by any product")
    p.add_argument("--enum-limit", type=int, default=d(None), help="cap on enumerated strings / witness length")
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="otrank", description="Generation and ranking for finite-state OT grammars.")
    _global_flags(parser, suppress=False)
    groups = parser.add_subparsers(dest="group", required=True)

    def leaf(sub, name, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_flags(p, suppress=True)
        return p

    def gen_common(p):
        p.add_argument("--ranking", help="constraint names, highest first; a prefix is completed in file order")
        p.add_argument("--underlying", "-u", help="underlying form (<eps> for empty)")

    g = groups.add_parser("generate", help="generation queries").add_subparsers(dest="action", required=True)
    for name, text in [
        ("opt", "list optimal candidates"),
        ("optval", "print the optimal violation vector"),
        ("optvalz", "is the last entry of the optimal vector zero"),
    ]:
        gen_common(leaf(g, name, text))
    for name in ("beatable", "best"):
        p = leaf(g, name, f"{name} query against a threshold vector")
        gen_common(p)
        p.add_argument("--k", help="comma-separated vector")
    p = leaf(g, "range", "is the optimal vector between two thresholds")
    gen_common(p)
    p.add_argument("--k1")
    p.add_argument("--k2")
    p = leaf(g, "check", "is the attested form optimal")
    gen_common(p)
    p.add_argument("--form", action="append", help="surface string (repeatable)")
    p.add_argument("--data", help="file of 'form <u> <surface>' lines")
    p = leaf(g, "checksset", "is some member of the attested set optimal")
    gen_common(p)
    p.add_argument("--sset", action="append", help="WDFA file for the attested set (repeatable)")
    p.add_argument("--data", help="file of 'sset <u> <wdfa>' lines")

    r = groups.add_parser("rank", help="ranking learners").add_subparsers(dest="action", required=True)
    for name, text in [
        ("rcd", "recursive constraint demotion on winner/loser pairs"),
        ("cd", "constraint demotion on winner/loser pairs"),
        ("edcd", "error-driven constraint demotion on attested forms"),
        ("mrcd", "multi-recursive constraint demotion on attested forms"),
        ("rcdall", "greedy ranking against all competitors"),
        ("sset", "ranking search for attested surface sets"),
    ]:
        p = leaf(r, name, text)
        p.add_argument("--data", help="pairs, forms or sset file")
        if name in ("edcd", "mrcd", "rcdall"):
            p.add_argument("--form", action="append", help="surface string (repeatable)")
            p.add_argument("--underlying", "-u")
        if name == "sset":
            p.add_argument("--sset", action="append")
            p.add_argument("--underlying", "-u")
            p.add_argument("--strategy", choices=("auto", "search", "enumerate"), default="auto")

    red = groups.add_parser("reduce", help="build reduction instances").add_subparsers(dest="action", required=True)
    for name in ("hamilton", "orderable"):
        p = leaf(red, name, f"{name} instance from a digraph")
        p.add_argument("--graph", help="graph file")
        p.add_argument("--random-order", type=int, help="random digraph on this many vertices")
        if name == "hamilton":
            p.add_argument("--bounded", action="store_true", help="intersect each constraint with gen")
    for name in ("msa", "cnfsat", "satunsat", "qsat2", "msalsb"):
        p = leaf(red, name, f"{name} instance from a CNF formula")
        p.add_argument("--cnf", help="DIMACS file")
        p.add_argument("--random-vars", type=int)
        p.add_argument("--random-clauses", type=int)
        if name == "cnfsat":
            p.add_argument("--variant", choices=("beatable", "check"), default="beatable")
        if name == "satunsat":
            p.add_argument("--cnf2", required=True, help="DIMACS file for the second formula")
        if name == "qsat2":
            p.add_argument("--r", type=int, required=True, help="number of existential variables")
    p = leaf(red, "permgrammar", "permutation grammar")
    p.add_argument("--r", type=int, required=True)

    dv = groups.add_parser("derive", help="derivational rule ordering").add_subparsers(dest="action", required=True)
    p = leaf(dv, "run", "apply a rule sequence")
    p.add_argument("--instance", required=True, help="derivational instance file or bundle")
    p.add_argument("--sequence", required=True, help="rule names, first applied first")
    p.add_argument("--input", help="input string (default: every pair's input)")
    p = leaf(dv, "order", "search for a rule ordering")
    p.add_argument("--instance", required=True)

    o = groups.add_parser("oracle", help="brute-force reference answers").add_subparsers(dest="action", required=True)
    for name in ("sat", "msa", "qsat2"):
        p = leaf(o, name, f"brute-force {name}")
        p.add_argument("--cnf")
        p.add_argument("--random-vars", type=int)
        p.add_argument("--random-clauses", type=int)
        if name == "qsat2":
            p.add_argument("--r", type=int, required=True)
    p = leaf(o, "hamilton", "brute-force Hamilton path")
    p.add_argument("--graph")
    p.add_argument("--random-order", type=int)
    p = leaf(o, "opt", "optimal candidates by enumeration")
    gen_common(p)
    p.add_argument("--max-len", type=int, default=8)
    p = leaf(o, "rank", "ranking by trying every permutation")
    p.add_argument("--underlying", "-u")
    p.add_argument("--form", action="append")
    p.add_argument("--sset", action="append")
    p.add_argument("--data")
    p.add_argument("--max-len", type=int, default=8)

    b = groups.add_parser("bench", help="benchmarks").add_subparsers(dest="action", required=True)
    p = leaf(b, "rcd-scaling", "time rcd at growing n with M proportional to n")
    p.add_argument("--sizes", help="comma-separated constraint counts")
    p.add_argument("--repeats", type=int, default=5)
    return parser


COMMANDS = {
    "generate": cmd_generate,
    "rank": cmd_rank,
    "reduce": cmd_reduce,
    "derive": cmd_derive,
    "oracle": cmd_oracle,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else YES
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    rep = Report(args.format)
    try:
        return COMMANDS[args.group](args, rep)
    except ResourceLimitError as exc:
        print(f"otrank: resource limit: {exc}", file=sys.stderr)
        return LIMIT
    except (InputError, ValueError, OSError) as exc:
        print(f"otrank: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())

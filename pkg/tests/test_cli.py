from pathlib import Path

import pytest

from otrank.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_rank_rcd_on_phi_d(capsys):
    code, out = run(capsys, "rank", "rcd", "--grammar", FIXTURES / "phi_d")
    assert code == 0
    order = out.split()
    assert sorted(order) == list("abcdef")
    pos = {c: i for i, c in enumerate(order)}
    assert pos["b"] < pos["d"] or (min(pos["a"], pos["c"]) < pos["d"] and min(pos["e"], pos["f"]) < pos["d"])


def test_rank_cd_tsv(capsys):
    code, out = run(capsys, "rank", "cd", "--grammar", FIXTURES / "phi_d", "--format", "tsv")
    assert code == 0
    assert out.splitlines()[0].startswith("1\t")


def test_check_581(capsys):
    g = FIXTURES / "early3"
    code, out = run(capsys, "generate", "check", "--grammar", g, "--ranking", "Early5,Early8,Early1", "--form", "581")
    assert code == 0 and out.strip() == "yes"
    code, _ = run(capsys, "generate", "check", "--grammar", g, "--ranking", "Early5,Early8,Early1", "--form", "518")
    assert code == 1


def test_generate_opt_and_optval(capsys):
    g = FIXTURES / "early3"
    code, out = run(capsys, "generate", "opt", "--grammar", g, "--ranking", "Early5,Early8,Early1")
    assert code == 0 and out.split() == ["581"]
    code, out = run(capsys, "generate", "optval", "--grammar", g, "--ranking", "Early5,Early8,Early1")
    assert out.strip() == "0,1,2,3,3,3,3,3"


def test_hamilton_edgeless_then_rank_sset(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("graph 3\n")
    out = tmp_path / "bundle"
    assert run(capsys, "reduce", "hamilton", "--graph", graph, "--out", out)[0] == 0
    code, text = run(capsys, "rank", "sset", "--grammar", out)
    assert code == 1 and "INCONSISTENT" in text


def test_hamilton_yes(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("graph 3\nedge 2 1\nedge 1 3\n")
    out = tmp_path / "bundle"
    run(capsys, "reduce", "hamilton", "--graph", graph, "--out", out)
    code, text = run(capsys, "rank", "sset", "--grammar", out)
    assert code == 0
    code, text = run(capsys, "oracle", "hamilton", "--graph", graph)
    assert code == 0 and "2 1 3" in text


def test_reduce_msa_and_oracle(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 3 2\n1 2 0\n-1 3 0\n")
    run(capsys, "reduce", "msa", "--cnf", cnf, "--out", tmp_path / "m")
    code, out = run(capsys, "generate", "optval", "--grammar", tmp_path / "m")
    assert code == 0 and out.strip().endswith("0,1,0")
    assert run(capsys, "oracle", "msa", "--cnf", cnf)[1].strip() == "010"


def test_reduce_cnfsat_and_qsat2(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 2 2\n1 2 0\n1 -2 0\n")
    run(capsys, "reduce", "cnfsat", "--variant", "check", "--cnf", cnf, "--out", tmp_path / "c")
    assert run(capsys, "generate", "check", "--grammar", tmp_path / "c")[0] == 1
    run(capsys, "reduce", "cnfsat", "--cnf", cnf, "--out", tmp_path / "b")
    assert run(capsys, "generate", "beatable", "--grammar", tmp_path / "b")[0] == 0
    run(capsys, "reduce", "qsat2", "--cnf", cnf, "--r", 1, "--out", tmp_path / "q")
    assert run(capsys, "rank", "sset", "--grammar", tmp_path / "q")[0] == 0
    assert run(capsys, "oracle", "qsat2", "--cnf", cnf, "--r", 1)[0] == 0


def test_random_reduction_is_seeded(tmp_path, capsys):
    for name in ("a", "b"):
        run(capsys, "reduce", "msalsb", "--random-vars", 4, "--seed", 7, "--out", tmp_path / name)
    assert (tmp_path / "a" / "source.cnf").read_text() == (tmp_path / "b" / "source.cnf").read_text()
    code, _ = run(capsys, "generate", "checksset", "--grammar", tmp_path / "a")
    assert code == run(capsys, "generate", "optvalz", "--grammar", tmp_path / "a")[0]


def test_derive_order_and_run(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("graph 3\nedge 1 2\nedge 2 3\nedge 3 1\n")
    run(capsys, "reduce", "orderable", "--graph", graph, "--out", tmp_path / "o")
    code, out = run(capsys, "derive", "order", "--instance", tmp_path / "o")
    assert code == 0 and out.split() == ["Move1", "Move2", "Move3", "Accept"]
    code, out = run(capsys, "derive", "run", "--instance", tmp_path / "o", "--sequence", "Move1,Move2,Move3,Accept")
    assert out.strip() == "123#0: <eps>"


def test_learners_on_forms(tmp_path, capsys):
    forms = tmp_path / "forms.txt"
    forms.write_text("form <eps> 581\n")
    for action in ("edcd", "mrcd", "rcdall"):
        code, out = run(capsys, "rank", action, "--grammar", FIXTURES / "early3", "--data", forms)
        assert code == 0
        assert out.split()[0] == "Early5"


def test_exit_codes(tmp_path, capsys):
    assert main(["bogus"]) == 2
    assert main(["rank", "rcd", "--grammar", str(tmp_path / "nope")]) == 2
    code = main(["generate", "opt", "--grammar", str(FIXTURES / "early3"), "--state-limit", "2"])
    assert code == 3
    capsys.readouterr()


def test_bench_small(capsys, tmp_path):
    code, out = run(capsys, "bench", "rcd-scaling", "--sizes", "0,64,128", "--repeats", 1, "--out", tmp_path)
    assert code == 0
    assert out.splitlines()[0].startswith("n\t")
    assert (tmp_path / "rcd_scaling.tsv").exists()


def test_oracle_reads_bundle_source(tmp_path, capsys):
    for seed in range(4):
        d = tmp_path / f"h{seed}"
        run(capsys, "reduce", "hamilton", "--random-order", 4, "--seed", seed, "--out", d)
        ranked, _ = run(capsys, "rank", "sset", "--grammar", d)
        brute, _ = run(capsys, "oracle", "hamilton", "--grammar", d)
        assert ranked == brute
    d = tmp_path / "q"
    run(capsys, "reduce", "qsat2", "--random-vars", 4, "--r", 2, "--seed", 1, "--out", d)
    ranked, _ = run(capsys, "rank", "sset", "--grammar", d)
    brute, _ = run(capsys, "oracle", "qsat2", "--r", 2, "--grammar", d)
    assert ranked == brute

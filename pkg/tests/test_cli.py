"""Command line: dispatch, exit codes and report formats."""

import subprocess
import sys

import pytest

from stratsimp.cli import run
from stratsimp.report import parse_machine


def records(argv):
    code, out = run(argv + ["--format", "machine"])
    return code, parse_machine(out)


def test_check_fibrant_example():
    code, recs = records(["check-fibrant", "example314"])
    assert code == 1
    v = recs[1]
    assert v["outcome"] == "not_equivalent" and v["kind"] == "unfilled_stratum_horn"
    assert v["labels"] == "0,0,0" and v["n"] == "2"
    assert recs[-1] == {"status": "fail"}


@pytest.mark.parametrize("target", ["lambda20", "isoinside"])
def test_check_fibrant_passes(target):
    assert run(["check-fibrant", target])[0] == 0


def test_classify_horn():
    code, out = run(["classify-horn", "--labels", "p,p,q", "--k", "0"])
    assert code == 0 and "TrivialLeft" in out


def test_gen_set_counts():
    code, recs = records(["gen-set", "I1", "--kind", "J_P", "--max-n", "1"])
    assert code == 0
    assert sum(1 for r in recs if r.get("record") == "generator") == 4
    assert recs[-2]["revalidated"] == "true"


def test_certify_and_verify(tmp_path):
    path = tmp_path / "c.cert"
    code, recs = records(["certify", "spine", "--n", "3", "--save", str(path)])
    assert code == 0 and recs[1]["steps"] == "4"
    assert run(["verify-cert", str(path)])[0] == 0
    assert run(["verify-cert", "spine3.cert"])[0] == 0


def test_links_equiv_counterexamples():
    code, out = run(["links-equiv", "collapse"])
    assert code == 1 and "homology" in out
    code, recs = records(["links-equiv", "glue"])
    assert code == 1
    bad = [r for r in recs if r.get("outcome") == "not_equivalent" and r.get("kind") == "pi0"]
    assert bad and (bad[0]["left"], bad[0]["right"]) == ("2", "1")


def test_decollage_check():
    assert run(["decollage-check", "perturbed"])[0] == 1
    assert run(["decollage-check", "isoinside"])[0] == 0


@pytest.mark.parametrize("argv", [
    ["adjunction", "const"],
    ["base-change", "const"],
    ["base-case", "--labels", "0,0,1"],
    ["non-lift", "--labels", "0,1", "--k", "0"],
    ["segal", "isoinside", "--string", "0<1<2"],
])
def test_passing_commands(argv):
    code, out = run(argv)
    assert code == 0, out


def test_appendix_eval_orientation():
    assert run(["appendix-eval", "--grid", "2", "--max-poset", "2", "--part", "retraction"])[0] == 0
    assert run(["appendix-eval", "--grid", "2", "--max-poset", "2", "--part", "retraction",
                "--printed-orientation"])[0] == 1


def test_usage_errors():
    assert run(["check-fibrant", "no_such_object"])[0] == 3
    assert run(["check-fibrant"])[0] == 3
    assert run(["frobnicate"])[0] == 3


def test_workspace_file(tmp_path):
    f = tmp_path / "mine.strat"
    f.write_text("poset P\nelem 0\n\nsset X trunc 2 complete\nsimplex a dim 0\n\nstrat X over P as pt\nlabel a 0\n")
    assert run(["check-fibrant", "pt", "-w", str(f)])[0] == 0
    bad = tmp_path / "bad.strat"
    bad.write_text("poset P\nelem 0\nrel 0 < 9\n")
    code, out = run(["check-fibrant", "pt", "-w", str(bad)])
    assert code == 3 and "bad.strat:3:" in out


def test_machine_output_is_deterministic():
    argv = ["links-equiv", "glue", "--format", "machine"]
    outs = set()
    for seed in ("0", "1"):
        proc = subprocess.run([sys.executable, "-m", "stratsimp.cli"] + argv, capture_output=True, text=True,
                              env={"PYTHONHASHSEED": seed, "PATH": ""})
        outs.add(proc.stdout)
        assert proc.returncode == 1
    assert len(outs) == 1
    assert outs.pop() == run(argv)[1]

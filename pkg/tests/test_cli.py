"""End-to-end CLI runs: outputs, exit codes, determinism."""
import os

import pytest

from sgcov.automata import parse_aut
from sgcov.cli import run_cli
from sgcov.semigroups import parse_sg

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data")


def sg(name):
    return os.path.join(DATA, name + ".sg")


def aut(name):
    return os.path.join(DATA, name + ".aut")


def run(capsys, *argv):
    code = run_cli(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_green_output(capsys):
    code, out, _ = run(capsys, "green", sg("rank_one_band"))
    assert code == 0
    assert "R: " in out and "regular J:" in out
    assert "omega exponent:" in out


def test_rank_values(capsys):
    for elt, r in (("i", 0), ("x", 0), ("i-", 1), ("x-", 1), ("0", 1)):
        code, out, _ = run(capsys, "rank", sg("null_rclass"), elt)
        assert code == 0
        assert "rank(%s) = %d" % (elt, r) in out


def test_cayley_roundtrips(capsys):
    code, out, _ = run(capsys, "cayley", sg("left_zero"))
    assert code == 0
    a = parse_aut(out)
    assert len(a.states) == 3  # fresh start + two elements


def test_expand_pipeline(capsys):
    code, out, _ = run(capsys, "expand", sg("left_zero"),
                       "-p", "maltsev:rb")
    assert code == 0
    assert parse_sg(out).alphabet == ("a", "b")


def test_glc_both_methods(capsys):
    code, out, _ = run(capsys, "glc", sg("trivial"), "--cover", "maltsev:rb",
                       "--method", "both", "--no-rank-condition")
    assert code == 0
    assert "PASS" in out


def test_glc_join_emits_cover_and_classes(capsys):
    code, out, _ = run(capsys, "glc", sg("trivial"), "--cover", "maltsev:rb",
                       "--method", "join")
    assert code == 0
    assert "class: " in out


def test_keylemma_gate_passing_pipeline(capsys):
    code, out, _ = run(capsys, "keylemma", sg("trivial"),
                       "-p", "profile:1|counter:2:2|maltsev:rb",
                       "--depth", "3", "-k", "1")
    assert code == 0
    assert "gate backwards_k: True" in out
    assert "0 failures" in out
    assert "PASS" in out


def test_check_all_small_corpus(capsys):
    code, out, _ = run(capsys, "check", "--property", "all",
                       "--corpus", "1,3,4")
    assert code == 0
    assert "0 failures" in out


def test_dot_output(capsys):
    code, out, _ = run(capsys, "dot", aut("left_zero"))
    assert code == 0
    assert out.startswith("digraph") and out.rstrip().endswith("}")


def test_exit_codes_parse_and_usage(capsys, tmp_path):
    code, _, err = run(capsys, "green", str(tmp_path / "missing.sg"))
    assert code == 2
    bad = tmp_path / "bad.sg"
    bad.write_text("not a semigroup\n")
    code, _, err = run(capsys, "green", str(bad))
    assert code == 2
    code, _, err = run(capsys, "expand", sg("left_zero"), "-p", "bogus")
    assert code == 2
    code, _, err = run(capsys, "check", "--corpus", "nope")
    assert code == 2
    code, _, err = run(capsys, "frobnicate")
    assert code == 2


def test_exit_code_resource_limit(capsys):
    # join enumeration is capped at 12 cover states; this cover has 19
    code, _, err = run(capsys, "glc", sg("trivial"),
                       "--cover", "profile:2|counter:3:3|maltsev:rb",
                       "--method", "join")
    assert code == 3
    assert "resource limit" in err


def test_determinism_byte_identical(capsys):
    outs = set()
    for _ in range(2):
        code, out, _ = run(capsys, "check", "--property", "all",
                           "--corpus", "2,3,4")
        assert code == 0
        outs.add(out)
    assert len(outs) == 1
    outs = set()
    for _ in range(2):
        code, out, _ = run(capsys, "dot", sg("rank_one_band"), "--ranks")
        assert code == 0
        outs.add(out)
    assert len(outs) == 1

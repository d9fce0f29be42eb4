import subprocess
import sys

import pytest

from onecoin.cli import main
from onecoin.fileformat import parse, serialize

from conftest import make_coin, make_resync


@pytest.fixture
def files(tmp_path):
    coin = tmp_path / "coin.pfa"
    coin.write_text(serialize(make_coin()))
    fig = tmp_path / "fig.pfa"
    fig.write_text(serialize(make_resync()))
    bad = tmp_path / "bad.pfa"
    bad.write_text("pfa\nstates: q0 q1\nalphabet: a\ninitial: q0\ntrans a q0 -> 1/2 q1\n")
    return tmp_path


def call(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_accept(files, capsys):
    code, out, _ = call(capsys, "accept", files / "coin.pfa", "--word", "a.a")
    assert code == 0 and out == "3/4 (0.75)\n"


def test_accept_kv(files, capsys):
    code, out, _ = call(capsys, "--format", "kv", "accept", files / "coin.pfa", "--word", "a.a")
    assert code == 0
    assert out == "word=a.a\nprob=3/4\ndecimal=0.75\n"
    assert call(capsys, "accept", files / "coin.pfa", "--word", "a.a", "--format", "kv")[1] == out


def test_validate(files, capsys):
    assert call(capsys, "validate", files / "coin.pfa")[:2] == (0, "ok\n")
    code, out, _ = call(capsys, "validate", files / "bad.pfa")
    assert code == 1 and "row sum 1/2" in out


def test_invalid_file_for_other_commands(files, capsys):
    code, _, err = call(capsys, "accept", files / "bad.pfa", "--word", "a")
    assert code == 2 and "row sum" in err


def test_parse_error_has_position(tmp_path, capsys):
    f = tmp_path / "x.pfa"
    f.write_text("pfa\nstates q\n")
    code, _, err = call(capsys, "validate", f)
    assert code == 2 and "line 2, column 8" in err


def test_usage_error_prints_grammar(capsys):
    code, _, err = call(capsys, "frobnicate")
    assert code == 2 and "file grammar" in err
    code, _, err = call(capsys, "accept")
    assert code == 2 and "file grammar" in err


def test_unknown_letter_exits_2(files, capsys):
    code, _, err = call(capsys, "accept", files / "coin.pfa", "--word", "z")
    assert code == 2 and "z" in err


def test_reduce_then_verify(files, capsys):
    out_file = files / "coin1.pfa"
    code, out, _ = call(capsys, "reduce", files / "coin.pfa", "--mode", "one-coin", "--out", out_file)
    assert code == 0 and "1 probabilistic transition" in out
    assert "trans star s_star -> 1/2 s0, 1/2 s1" in out_file.read_text()
    code, out, _ = call(capsys, "verify", files / "coin.pfa", "--mode", "one-coin", "--max-len", "4")
    assert code == 0 and out == "verified, 5 words\n"


@pytest.mark.parametrize("mode, words", [("thirds", 3), ("value", 7)])
def test_verify_other_modes(files, capsys, mode, words):
    # value mode checks words over the thirds-form alphabet, which adds sharp
    code, out, _ = call(capsys, "verify", files / "coin.pfa", "--mode", mode, "--max-len", "2", "--p-max", "3")
    assert code == 0 and out.startswith(f"verified, {words} words, p up to 3")


def test_reduce_to_stdout_round_trips(files, capsys):
    code, out, _ = call(capsys, "reduce", files / "coin.pfa", "--mode", "value")
    assert code == 0 and "finish" in parse(out).alphabet


def test_lambda_refused(files, capsys):
    code, out, err = call(capsys, "reduce", files / "coin.pfa", "--mode", "value", "--lambda", "1/2")
    assert code == 2 and out == ""
    assert "general-lambda gadget is unspecified" in err


def test_bad_lambda_is_usage_error(files, capsys):
    assert call(capsys, "isolate", files / "coin.pfa", "--lambda", "x", "--max-len", "2")[0] == 2


def test_encode(files, capsys):
    code, out, _ = call(capsys, "encode", files / "coin.pfa", "--mode", "thirds", "--word", "a", "--p", "1")
    assert (code, out) == (0, "a.sharp\n")
    code, out, _ = call(capsys, "encode", files / "coin.pfa", "--mode", "one-coin", "--word", "a")
    assert out == "check[a,q0].star.apply[a,q0].check[a,q1].star.apply[a,q1].merge\n"


def test_value_and_isolate(files, capsys):
    code, out, _ = call(capsys, "--format", "kv", "value", files / "coin.pfa", "--max-len", "3")
    assert code == 0 and "best_prob=7/8\n" in out and "best_word=a.a.a\n" in out
    code, out, _ = call(capsys, "--format", "kv", "isolate", files / "coin.pfa", "--lambda", "1", "--max-len", "3")
    assert code == 0 and "min_gap=1/8\n" in out


def test_value_restricted_to_image(files, capsys):
    out_file = files / "coin1.pfa"
    call(capsys, "reduce", files / "coin.pfa", "--mode", "one-coin", "--out", out_file)
    code, out, _ = call(capsys, "--format", "kv", "value", out_file, "--max-len", "14", "--restrict-image")
    assert code == 0 and "best_prob=3/4\n" in out


def test_sweep(capsys):
    code, out, _ = call(capsys, "sweep", "--trials", "3", "--states", "3", "--letters", "2", "--max-len", "2")
    assert code == 0 and out == "3 trials, 0 failed\n"


def test_dot(files, capsys):
    code, out, _ = call(capsys, "dot", files / "fig.pfa", "--word", "a.b.b.a.b")
    assert code == 0 and out.startswith("digraph") and "peripheries=2" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["accept", "coin.pfa", "--word", "a.a"],
        ["reduce", "coin.pfa", "--mode", "value"],
        ["verify", "coin.pfa", "--mode", "thirds", "--max-len", "3"],
        ["dot", "fig.pfa", "--word", "a.b.b.a.b"],
        ["sweep", "--trials", "4", "--states", "3", "--letters", "2", "--max-len", "2", "--seed", "5"],
    ],
)
def test_repeated_runs_are_byte_identical(files, capsys, argv):
    argv = [str(files / a) if a.endswith(".pfa") else a for a in argv]
    outs = {call(capsys, *argv) for _ in range(3)}
    assert len(outs) == 1


def test_module_entry_point(files):
    res = subprocess.run(
        [sys.executable, "-m", "onecoin", "accept", str(files / "coin.pfa"), "--word", "a.a"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and res.stdout == "3/4 (0.75)\n"

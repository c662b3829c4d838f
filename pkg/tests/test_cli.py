import json
import os

import numpy as np
import pytest

from curvecalc import cli, formats

DATA = os.path.join(os.path.dirname(__file__), "data")


def path(name):
    return os.path.join(DATA, name)


def test_eval_sqrt_of_diagonal(tmp_path, capsys):
    out = tmp_path / "result.json"
    code = cli.main(
        [
            "eval",
            "--nf", path("power_half.json"),
            "--op", path("diag49.json"),
            "--vec", path("e.json"),
            "--out", str(out),
        ]
    )
    assert code == 0
    result = json.load(open(out))
    got = formats.vector_from_json(result)
    np.testing.assert_allclose(got, [2.0, 3.0], atol=1e-6)
    assert result["diagnostics"]["backend"] in ("compiled", "numpy")


def test_eval_writes_to_stdout(capsys):
    code = cli.main(
        ["eval", "--nf", path("power_half.json"), "--op", path("diag49.json"), "--vec", path("e.json")]
    )
    assert code == 0
    result = json.loads(capsys.readouterr().out)
    np.testing.assert_allclose(formats.vector_from_json(result), [2.0, 3.0], atol=1e-6)


def test_eval_malformed_json_exit_3(capsys):
    code = cli.main(
        ["eval", "--nf", path("malformed.json"), "--op", path("diag49.json"), "--vec", path("e.json")]
    )
    assert code == 3
    assert "error" in capsys.readouterr().err


def test_eval_spectrum_on_carrier_exit_2(capsys):
    code = cli.main(
        ["eval", "--nf", path("power_half.json"), "--op", path("neg_op.json"), "--vec", path("e.json")]
    )
    assert code == 2
    assert "node" in capsys.readouterr().err


def test_check_unknown_suite_exit_3(capsys):
    assert cli.main(["check", "nonsense"]) == 3
    assert "unknown suite" in capsys.readouterr().err


def test_check_resolvent_passes(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code = cli.main(["check", "resolvent", "--n", "5", "--seed", "7", "--out", str(out)])
    assert code == 0
    lines = open(out).read().strip().splitlines()
    assert lines[0] == "suite,name,value,tol,passed"
    assert len(lines) == 6
    assert all(line.endswith(",1") for line in lines[1:])


def test_check_csv_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        code = cli.main(["check", "resolvent", "--n", "4", "--seed", "11", "--out", str(out)])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_check_estimates_single_lemma(tmp_path, capsys):
    out = tmp_path / "est.csv"
    code = cli.main(
        ["check", "estimates", "--lemma", "3.4b", "--n", "10", "--seed", "1", "--out", str(out)]
    )
    assert code == 0
    body = open(out).read()
    assert "lemma_3.4b_violations" in body
    assert "lemma_3.5" not in body


def test_threads_env(monkeypatch):
    monkeypatch.setenv("CURVECALC_THREADS", "3")
    assert cli._threads() == 3
    monkeypatch.setenv("CURVECALC_THREADS", "junk")
    assert cli._threads() == 1

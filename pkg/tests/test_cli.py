import json

import pytest

from ghzgame.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_bound(capsys):
    code, out = run(capsys, "bound", "--n", "5")
    assert code == 0 and out.strip() == "5/2^3  = 0.625"
    code, out = run(capsys, "bound", "--n", "7", "--json")
    assert json.loads(out) == {"n": 7, "bound": "9/2^4", "decimal": "0.5625"}


def test_usage_errors(capsys):
    assert main(["bound", "--n", "2"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["match", "--n", "3", "--strategy", "nope"])
    assert exc.value.code == 2
    assert main(["match", "--n", "3", "--strategy", "table1", "--p", "0.9"]) == 2


def test_quantum_input_with_oracle(capsys):
    code, out = run(capsys, "quantum", "--n", "3", "--input", "110", "--oracle", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["oracle_matches"]
    assert set(doc["analytic"]) == {"001", "010", "100", "111"}
    assert doc["oracle"] == pytest.approx(doc["analytic"], abs=1e-12)


def test_quantum_trials_and_exhaustive_oracle(capsys):
    code, out = run(capsys, "quantum", "--n", "4", "--trials", "2000", "--seed", "1", "--json")
    assert code == 0 and json.loads(out)["win_rate"] == 1.0
    code, out = run(capsys, "quantum", "--n", "5", "--oracle")
    assert code == 0 and "16/16" in out


def test_enumerate(capsys):
    code, out = run(capsys, "enumerate", "--n", "4", "--json")
    doc = json.loads(out)
    assert doc["bound"] == "3/2^2"
    optimal = [(r["k"], r["flip_parity"]) for r in doc["classes"] if r["optimal"]]
    assert optimal == [(0, 1), (2, 0), (4, 1)]
    code, out = run(capsys, "enumerate", "--n", "3", "--csv")
    assert out.splitlines()[0] == "k,flip_parity,strategies,wins,proportion,decimal,optimal"


def test_table1(capsys):
    code, out = run(capsys, "table1", "--n", "6", "--verify", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["verified"]
    assert doc["strategy"] == ["10", "00", "00", "00", "00", "00"]
    assert doc["proportion"] == doc["bound"] == "5/2^3"


def test_conjecture(capsys):
    code, out = run(capsys, "conjecture", "--n", "5", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["all_equal_bound"] and doc["counterexamples"] == []
    assert set(doc["per_input"].values()) == {"5/8"}
    code, out = run(capsys, "conjecture", "--n", "4", "--method", "enumerate")
    assert code == 0 and "every question at the bound" in out


def test_noise_modes(capsys, tmp_path):
    code, out = run(capsys, "noise", "--n", "3", "--p", "0.9", "--json")
    doc = json.loads(out)
    assert doc["p_n"] == pytest.approx(0.756, abs=1e-12) and doc["beats_classical"]
    target = tmp_path / "thr.csv"
    code, out = run(capsys, "noise", "--threshold", "--n-max", "10", "--out", str(target))
    lines = target.read_text().splitlines()
    assert code == 0 and out == "" and len(lines) == 9
    code, out = run(capsys, "noise", "--detector", "--q", "0.72", "--json")
    assert json.loads(out)["min_players"] == 21
    code, out = run(capsys, "noise", "--detector", "--q", "0.70", "--json")
    assert json.loads(out)["min_players"] is None


def test_match(capsys):
    argv = ["match", "--n", "3", "--strategy", "quantum_noisy", "--p", "0.9", "--trials", "5000", "--seed", "8", "--json"]
    code, one = run(capsys, *argv)
    code, many = run(capsys, *argv, "--workers", "4")
    assert code == 0 and one == many
    code, out = run(capsys, "match", "--n", "3", "--strategy", "deterministic", "--code", "11,11,11",
                    "--exhaustive", "--trials", "400", "--json")
    assert json.loads(out)["wins"] == 300


def test_lemmas(capsys):
    code, out = run(capsys, "lemmas", "--n-max", "24", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]

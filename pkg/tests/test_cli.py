import csv
import io
import json

import numpy as np
import pytest

from qbattery.cli import SWEEP_HEADER, main, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_capacity_json(capsys):
    code, out, _ = run(capsys, "capacity", "--builtin", "bell-diagonal", "--eps", "0.5,0.3", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["total"] == pytest.approx(0.68)
    assert d["rbc_ic"] == pytest.approx(0.1)
    assert d["rbc_c"] == pytest.approx(0.58)
    assert d["marginals"] == pytest.approx([0, 0], abs=1e-15)


def test_capacity_from_file(capsys, tmp_path):
    state = write(tmp_path, "s.json", json.dumps({"n": 1, "diag": [0.9, 0.1], "anti": [[0.0, 0.0]]}))
    ham = write(tmp_path, "h.json", json.dumps({"eps": [0.5], "gamma": 0}))
    code, out, _ = run(capsys, "capacity", "--state", state, "--hamiltonian", ham, "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[0]["total"]) == pytest.approx(0.8)


def test_out_file(capsys, tmp_path):
    target = tmp_path / "cap.txt"
    code, out, _ = run(capsys, "capacity", "--builtin", "ex2-rho1", "--out", str(target))
    assert code == 0 and out == ""
    assert "rbc_c" in target.read_text()


def test_malformed_json_names_field(capsys, tmp_path):
    state = write(tmp_path, "s.json", json.dumps({"n": 2, "diag": [0.25, 0.25, 0.25, "x"], "anti": [0, 0]}))
    code, _, err = run(capsys, "capacity", "--state", state)
    assert code == 2
    assert "diag[3]" in err


def test_missing_field(capsys, tmp_path):
    state = write(tmp_path, "s.json", json.dumps({"n": 2, "diag": [0.25] * 4}))
    code, _, err = run(capsys, "capacity", "--state", state)
    assert code == 2 and "anti" in err


def test_broken_json(capsys, tmp_path):
    code, _, err = run(capsys, "capacity", "--state", write(tmp_path, "s.json", "{not json"))
    assert code == 2 and "malformed" in err


def test_invalid_state(capsys, tmp_path):
    state = write(tmp_path, "s.json", json.dumps({"n": 2, "diag": [0.5, 0.5, 0.5, 0.5], "anti": [0, 0]}))
    code, _, err = run(capsys, "capacity", "--state", state)
    assert code == 3 and "invalid state" in err


def test_bad_hamiltonian(capsys):
    code, _, _ = run(capsys, "capacity", "--builtin", "ex2-rho1", "--eps", "0.1,0.3,0.5")
    assert code == 4


def test_arity_mismatch(capsys):
    code, _, err = run(capsys, "capacity", "--builtin", "ex2-rho1", "--eps", "0.5,0.3")
    assert code == 4 and "qubits" in err


def test_unknown_flag():
    with pytest.raises(SystemExit) as exc:
        main(["capacity", "--nope"])
    assert exc.value.code == 2


def test_gain_too_large(capsys):
    code, _, _ = run(capsys, "gain", "--builtin", "ghz-noise", "--n", "4", "--beta", "0.5")
    assert code == 4


def test_gain_json(capsys):
    code, out, _ = run(capsys, "gain", "--builtin", "ghz-noise", "--n", "3", "--beta", "0.5", "--format", "json")
    assert code == 0
    assert json.loads(out)["ratio"] == pytest.approx(1.0)


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep-ghz", "--n", "2,3", "--beta-grid", "0:1:3", "--gamma-grid", "0,0.5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert tuple(rows[0]) == SWEEP_HEADER
    assert len(rows) == 2 * 3 * 2
    for r in rows:
        n, beta, gamma = int(r["n"]), float(r["beta"]), float(r["gamma"])
        s = np.hypot(0.6 + 0.1 * n, gamma)
        assert float(r["total"]) == pytest.approx(2 * beta * s, abs=1e-10)
        assert float(r["gain"]) == pytest.approx((1.2 + 0.2 * n) * beta, abs=1e-10)
        if beta == 0:
            assert r["ratio"] == ""
            assert all(abs(float(r[k])) <= 1e-10 for k in ("total", "rbc", "rbc_ic", "rbc_c", "gain"))
        else:
            assert float(r["ratio"]) == pytest.approx((1.2 + 0.2 * n) / (2 * s), abs=1e-10)


def test_sweep_empty_grid(capsys):
    code, _, _ = run(capsys, "sweep-ghz", "--beta-grid", "0:1:0")
    assert code == 4


def test_sweep_bad_grid(capsys):
    code, _, _ = run(capsys, "sweep-ghz", "--beta-grid", "0:1")
    assert code == 2


def test_parse_grid():
    np.testing.assert_allclose(parse_grid("0:1:5", "g"), [0, 0.25, 0.5, 0.75, 1])
    np.testing.assert_allclose(parse_grid("0.1,0.2", "g"), [0.1, 0.2])
    np.testing.assert_allclose(parse_grid("0.3", "g"), [0.3])


def test_counterexamples(capsys):
    code, out, _ = run(capsys, "counterexamples", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["reproduced"]
    gc = {(r["state_name"], r["label"]): r["gamma_c"] for r in d["relations"] if r["gamma_c"] is not None}
    assert gc[("ex2-rho1", "EX2-1")] == pytest.approx(0.34753852805, abs=1e-8)
    assert gc[("ex2-rho2", "EX2-2")] == pytest.approx(0.23470060500, abs=1e-8)
    assert gc[("ex2-rho3", "EX2-3")] == pytest.approx(0.34753852805, abs=1e-8)


def test_counterexamples_not_reproduced(capsys):
    # with every local energy equal the first state no longer breaks its relation
    code, _, err = run(capsys, "counterexamples", "--eps", "0.1,0.1,0.1", "--format", "csv")
    assert code == 5 and "reproduction failed" in err


def test_fuzz_deterministic(capsys):
    a = run(capsys, "fuzz", "--n", "3", "--samples", "30", "--seed", "5", "--format", "json")
    b = run(capsys, "fuzz", "--n", "3", "--samples", "30", "--seed", "5", "--format", "json")
    assert a == b and a[0] == 0
    assert json.loads(a[1])["ok"]


def test_fuzz_zero_samples(capsys):
    code, out, _ = run(capsys, "fuzz", "--n", "2", "--samples", "0")
    assert code == 0 and "violations=0" in out


@pytest.mark.parametrize("argv", [["fuzz", "--n", "5"], ["fuzz", "--samples", "-1"]])
def test_fuzz_config_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 4

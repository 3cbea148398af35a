"""Command-line behaviour: exit codes, payload shapes, determinism."""

import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from ame_forge.cli import SWEEP_COLUMNS, main
from ame_forge.constructors import construct_mmn
from ame_forge.tensor import PureState, bell, ghz


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, state in {
        "ghz": ghz(2, 3),
        "bell2": bell(2),
        "bell3": bell(3),
        "mmn": construct_mmn(2, 4),
        "prod": PureState.basis((2, 2, 2), (0, 0, 0)),
    }.items():
        p = tmp_path / f"{name}.json"
        p.write_text(state.to_json())
        paths[name] = str(p)
    return paths


def test_solve_msa_345(capsys):
    code, out, _ = run(capsys, "solve-msa", "--dims", "3", "4", "5")
    assert code == 0
    data = json.loads(out)
    assert data["feasible"] is True
    y = [[Fraction(v) for v in row] for row in data["y"]]
    assert [sum(r) for r in y] == [1, 1, 1]


def test_solve_msa_infeasible_analog(capsys):
    code, out, _ = run(capsys, "solve-msa", "--dims", "2", "3", "5", "--shifts", "0", "2")
    data = json.loads(out)
    assert code == 0 and data["feasible"] is False and data["farkas"]


def test_solve_msa_outside_regime_reports_warning(capsys):
    code, out, _ = run(capsys, "solve-msa", "--dims", "2", "3", "4")
    assert code == 0 and "warning" in json.loads(out)


def test_construct_2mmn_nonexistence(capsys):
    code, out, _ = run(capsys, "construct", "--family", "2mmn", "--m", "3", "--n", "2")
    assert code == 1
    err = json.loads(out)["error"]
    assert err["kind"] == "nonexistence"
    assert "no AME" in err["message"] and "m not multiple of n" in err["message"]


def test_construct_then_verify(capsys, tmp_path):
    out_path = tmp_path / "s.json"
    code, _, _ = run(capsys, "construct", "--family", "lmkm", "--l", "2", "--m", "3", "--k", "2", "--out", str(out_path))
    assert code == 0
    state = PureState.from_json(out_path.read_text())
    assert state.dims == (2, 3, 6)
    code, out, _ = run(capsys, "verify", str(out_path), "--k", "1")
    assert code == 0 and json.loads(out)["is_ame"] is True


def test_construct_direct_sum(capsys, files):
    code, out, _ = run(capsys, "construct", "--family", "direct-sum", "--psi", files["ghz"], "--phi", files["ghz"])
    assert code == 0 and json.loads(out)["dims"] == [4, 4, 2]


def test_verify_exit_codes(capsys, files):
    assert run(capsys, "verify", "--k", "1", files["ghz"])[0] == 0
    code, out, _ = run(capsys, "verify", "--k", "1", files["prod"])
    assert code == 1 and json.loads(out)["is_k_uniform"] is False


def test_verify_tolerance_from_environment(capsys, files, monkeypatch):
    monkeypatch.setenv("AME_FORGE_TOL", "1e-6")
    _, out, _ = run(capsys, "verify", files["ghz"])
    assert json.loads(out)["tolerance"] == 1e-6
    _, out, _ = run(capsys, "verify", files["ghz"], "--tol", "1e-3")
    assert json.loads(out)["tolerance"] == 1e-3


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--dims", "3", "4", "5")
    data = json.loads(out)
    assert code == 0 and data["status"] == "irreducible-certified" and data["reason"] == "Thm2.i"
    code, out, _ = run(capsys, "classify", "--dims", "2", "2", "2", "2")
    assert code == 1 and json.loads(out)["error"]["kind"] == "not-applicable"


def test_classify_state(capsys, files):
    code, out, _ = run(capsys, "classify", files["ghz"])
    assert code == 0 and json.loads(out)["status"] == "irreducible-certified"


def test_compose_modes(capsys, files, tmp_path):
    code, out, _ = run(capsys, "compose", "--mode", "even", files["bell2"], files["bell3"])
    assert code == 0 and json.loads(out)["dims"] == [2, 3, 6]
    code, out, _ = run(capsys, "compose", "--mode", "odd", files["ghz"], files["ghz"], "--pairing", "1:1,2:2")
    assert code == 0 and json.loads(out)["dims"] == [2, 2, 4, 4]
    code, out, _ = run(capsys, "compose", "--mode", "split", files["bell2"], "--party", "0", "--da", "2", "--db", "1")
    assert code == 0 and json.loads(out)["dims"] == [2, 1, 2]
    code, out, _ = run(capsys, "compose", "--mode", "even", files["bell2"], files["bell2"], "--pairing", "0:1")
    assert code == 1 and json.loads(out)["error"]["kind"] == "invalid-pairing"


def test_isometry_check(capsys, files):
    code, out, _ = run(capsys, "isometry-check", "--k", "1", files["mmn"])
    data = json.loads(out)
    assert code == 0 and data["passed"] is True
    assert sorted(s["exact_constant"] for s in data["splits"]) == ["1/2", "1/2", "1/4"]


def test_steer(capsys, files):
    code, out, _ = run(capsys, "steer", files["mmn"], "--party", "2")
    data = json.loads(out)
    assert code == 0 and len(data["outcomes"]) == 4
    for row in data["outcomes"]:
        assert row["probability"] == pytest.approx(0.25)
        assert row["schmidt_coefficients"] == pytest.approx([2 ** -0.5] * 2)


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--table", "2mmn", "--m-max", "6", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert tuple(rows[0]) == SWEEP_COLUMNS
    for row in rows:
        m, n = int(row["m"]), int(row["n"]) - int(row["m"])
        expect = "true" if m % n == 0 else "false"
        assert row["constructed"] == row["msa_feasible"] == row["verified"] == expect


def test_sweep_msa_table(capsys):
    code, out, _ = run(capsys, "sweep", "--table", "msa", "--l-max", "3", "--m-max", "5", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["l"], r["m"], r["n"]) for r in rows][:2] == [("3", "4", "5"), ("3", "4", "6")]
    assert all(r["msa_feasible"] == "true" for r in rows)


def test_text_format(capsys, files):
    code, out, _ = run(capsys, "verify", files["ghz"], "--format", "text")
    assert code == 0 and "is_ame: True" in out


def test_usage_errors(capsys, files):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "construct", "--family", "lmkm", "--m", "3")[0] == 2
    assert run(capsys, "verify", "/nonexistent.json")[0] == 2
    assert run(capsys, "verify", files["ghz"], "--format", "csv")[0] == 2


def test_module_entry_point_is_deterministic(files):
    cmd = [sys.executable, "-m", "ame_forge", "solve-msa", "--dims", "3", "5", "7"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and json.loads(first)["feasible"] is True

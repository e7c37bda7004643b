import json
import subprocess
import sys
from pathlib import Path

import pytest

from unitary_redheffer.cli import main
from unitary_redheffer.config import RunConfig, load_config

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("kind,fname", [("rstar", "rstar8.txt"), ("s", "s8.txt"), ("t", "t8.txt")])
def test_matrix_fixtures_bytewise(capsys, kind, fname):
    code, out, _ = run(capsys, "matrix", "--n", "8", "--kind", kind, "--format", "dense")
    assert code == 0
    assert out.encode() == (DATA / fname).read_bytes()


def test_matrix_small_and_csv(capsys):
    assert run(capsys, "matrix", "--n", "1", "--kind", "rstar")[1] == "1\n"
    code, out, _ = run(capsys, "matrix", "--n", "3", "--format", "csv")
    assert out.splitlines()[:3] == ["i,j,v", "1,1,1", "1,2,1"]


def test_det(capsys):
    assert run(capsys, "det", "--n", "8", "--method", "sieve")[1] == "-4\n"
    assert run(capsys, "det", "--n", "8", "--method", "bareiss")[1] == "-4\n"
    assert run(capsys, "det", "--n", "1")[1] == "1\n"


def test_charpoly(capsys):
    assert run(capsys, "charpoly", "--n", "8", "--basis", "shifted")[1] == "μ^8 - 7μ^6 - 2μ^5\n"
    assert run(capsys, "charpoly", "--n", "2", "--basis", "shifted")[1] == "μ^2 - 1\n"
    assert run(capsys, "charpoly", "--n", "8", "--ascii", "--reduced")[1] == "u^3 - 7u - 2\n"
    code, out, _ = run(capsys, "charpoly", "--n", "3", "--basis", "monomial", "--check-oracle")
    assert code == 0 and out == "1 -3 1 1\n"


def test_scan_mult(capsys, tmp_path):
    out = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan-mult", "--from", "1", "--to", "3000", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,k_n,m_n,lower,upper,ostar_gap"
    assert lines[8].startswith("8,3,5,")
    assert lines[30].startswith("30,4,")
    assert lines[2310].startswith("2310,6,")


def test_eigs(capsys):
    code, out, _ = run(capsys, "eigs", "--n", "2", "--method", "roots")
    assert code == 0
    vals = sorted(float(line.split(",")[2]) for line in out.splitlines()[1:])
    assert vals == pytest.approx([0.0, 2.0], abs=1e-14)

    code, out, _ = run(capsys, "eigs", "--n", "10000", "--method", "roots", "--compare")
    roots_row = out.splitlines()[1].split(",")
    assert all(c for c in roots_row)
    code, out, _ = run(capsys, "eigs", "--n", "10000", "--method", "power")
    lam = float(out.splitlines()[1].split(",")[1])
    assert abs(lam - float(roots_row[1])) <= 1e-8 * lam


def test_eigs_threads_deterministic(capsys):
    a = run(capsys, "--threads", "1", "eigs", "--n", "100", "--n", "1000", "--n", "30", "--compare")[1]
    b = run(capsys, "--threads", "3", "eigs", "--n", "100", "--n", "1000", "--n", "30", "--compare")[1]
    assert a == b and len(a.splitlines()) == 4


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "1")
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(capsys, "verify", "--max-n", "20")
    summary = json.loads(out)
    assert code == 0 and all(s["ok"] and s["cases"] > 0 for s in summary["suites"])


def test_verify_fault_injection(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "12", "--tamper-s2", "1")
    assert code == 1
    suites = {s["name"]: s for s in json.loads(out)["suites"]}
    assert suites["factorization"]["ok"]
    assert not suites["charpoly"]["ok"]


def test_exit_codes(capsys):
    assert run(capsys, "matrix", "--n", "1000")[0] == 3
    assert run(capsys, "det", "--n", "600", "--method", "bareiss")[0] == 3
    assert run(capsys, "charpoly", "--n", "100", "--basis", "monomial")[0] == 3
    assert run(capsys, "scan-mult", "--from", "5", "--to", "2")[0] == 2
    assert run(capsys, "eigs", "--n", "1")[0] == 2
    assert run(capsys, "--threads", "0", "det", "--n", "3")[0] == 2
    assert run(capsys, "eigs", "--n", "100", "--method", "power", "--max-iter", "2")[0] == 4
    with pytest.raises(SystemExit) as exc:
        main(["matrix", "--kind", "q"])
    assert exc.value.code == 2


def test_guard_overrides(capsys):
    assert run(capsys, "--dense-max", "4", "matrix", "--n", "8")[0] == 3


def test_module_entry_point_is_byte_stable():
    cmd = [sys.executable, "-m", "unitary_redheffer", "scan-mult", "--from", "1", "--to", "500"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"n,k_n,m_n")


def test_config_file_and_env(tmp_path, monkeypatch):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"segment_size": 64, "guards": {"dense_max": 100, "oracle_max": 30}}))
    cfg = load_config(str(path))
    assert cfg.segment_size == 64 and cfg.guards.dense_max == 100
    monkeypatch.setenv("UNITARY_REDHEFFER_THREADS", "4")
    assert load_config(str(path)).threads == 4
    assert load_config(None, threads=2).threads == 2
    with pytest.raises(ValueError):
        RunConfig.from_dict({"bogus": 1})
    with pytest.raises(ValueError):
        RunConfig(segment_size=1)


@pytest.mark.slow
def test_verify_max_60(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "60")
    summary = json.loads(out)
    assert code == 0 and summary["ok"]
    assert {s["name"] for s in summary["suites"]} >= {"factorization", "charpoly", "determinant", "traces"}

import json
import subprocess
import sys

import pytest

from padic_charsums.cli import main


def run(args, capsys):
    code = main(args)
    return code, capsys.readouterr()


def test_postnikov(capsys):
    code, out = run(["verify-postnikov", "--p", "7", "--n", "2"], capsys)
    rep = json.loads(out.out)
    assert code == 0 and rep["passed"] and len(rep["results"]) == 36


def test_postnikov_usage(capsys):
    code, out = run(["verify-postnikov", "--n", "1"], capsys)
    assert code == 2 and "n must be at least 2" in out.err


def test_exponents(capsys):
    code, out = run(["exponents"], capsys)
    rep = json.loads(out.out)
    assert rep["crossover"] == "19/35" and rep["supersede"]["first"] == [3, 4, 5]


def test_expsum_single(capsys):
    code, out = run(["expsum", "--p", "5", "--m", "2", "--num", "0,0,1"], capsys)
    rep = json.loads(out.out)
    assert code == 0 and rep["classes"][0]["abs_sum"] == pytest.approx(5.0)


def test_expsum_skipped(capsys):
    code, out = run(["expsum", "--p", "5", "--m", "2", "--num", "0,5"], capsys)
    assert code == 0 and json.loads(out.out)["status"] == "skipped"


def test_expsum_corpus_small(capsys):
    code, out = run(["expsum", "--count", "30", "--seed", "2"], capsys)
    assert code == 0 and json.loads(out.out)["passed"]


def test_critpoints(capsys):
    code, out = run(["critpoints", "--p", "5", "--num=-1,3,-3,1"], capsys)
    assert json.loads(out.out)["points"] == [{"alpha": 1, "nu": 2}]
    code, out = run(["critpoints", "--count", "40"], capsys)
    assert code == 0 and json.loads(out.out)["passed"]


def test_sweep_empty_grid_and_bad_form(capsys, tmp_path):
    code, out = run(["sweep", "--grid", "10:20:0", "--branch", "one-shift"], capsys)
    assert code == 0 and out.out.strip() == "p,n,Q_a,Q_b,Q_c,chi_index,M,N,branch,abs_sum,bound,ratio,seconds"
    code, out = run(["sweep", "--form", "1,1,5"], capsys)
    assert code != 0


def test_sweep_config_and_flags(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"p": 5, "n": 4, "grid": "10:40:3", "branch": "two-shift", "jobs": 1}))
    out = tmp_path / "s.csv"
    code, _ = run(["sweep", "--config", str(cfg), "--branch", "one-shift", "--out", str(out)], capsys)
    rows = out.read_text().splitlines()
    assert code == 0 and len(rows) == 4 and rows[1].split(",")[8] == "one-shift"
    assert json.loads((tmp_path / "s.json").read_text())[0]["N"] == 10


def test_sweep_jobs_same_bytes(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["sweep", "--p", "5", "--n", "4", "--grid", "10:60:4", "--branch", "one-shift"]
    main(base + ["--jobs", "1", "--out", str(a)])
    main(base + ["--jobs", "2", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_identities(capsys):
    code, out = run(["identities", "--p", "5", "--n", "3"], capsys)
    assert code == 0 and json.loads(out.out)["passed"]


def test_audit_json(tmp_path, capsys):
    out = tmp_path / "a.json"
    code, _ = run(["audit-multiplicity", "--p", "5", "--out", str(out)], capsys)
    rep = json.loads(out.read_text())[0]
    assert code == 0 and rep["refinement_asserted"] and not rep["violations"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "padic_charsums", "exponents", "--j1", "3", "--j2", "3"],
                       capture_output=True, text=True, check=True)
    assert json.loads(r.stdout)["crossover"] == "14/25"

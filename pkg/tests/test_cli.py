import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

import oracles
from mirrorcount import cli

GOLDEN = Path(__file__).parent / "golden"

# (file name, argv); regenerate with MIRRORCOUNT_UPDATE_GOLDEN=1
GOLDEN_CASES = [
    ("verify_congruence_hesse_l3_f7.json",
     ["verify-congruence", "--n", "2", "--p", "7", "--a", "1", "--lambda", "3", "--kmax", "4", "--no-cache"]),
    ("count_hesse_l0_f7.csv",
     ["count", "--p", "7", "--lambda", "0", "--kmax", "3", "--format", "csv", "--no-cache"]),
    ("verify_unit_p3_f5.json",
     ["verify-unit", "--family", "pn", "--n", "3", "--p", "5", "--a", "1", "--kmax", "4", "--no-cache"]),
    ("zeta_fit_hesse_l0_f7.json",
     ["zeta-fit", "--p", "7", "--lambda", "0", "--kmax", "4", "--genus", "1", "--no-cache"]),
    ("smoothness_n2_f7.json", ["smoothness", "--n", "2", "--p", "7", "--a", "1"]),
    ("hodge_numbers_3_4.json", ["hodge-numbers", "--n", "3", "--d", "4"]),
]


@pytest.mark.parametrize("name,argv", GOLDEN_CASES, ids=[c[0] for c in GOLDEN_CASES])
def test_golden(name, argv):
    code, text = cli.run(argv)
    assert code == 0
    path = GOLDEN / name
    if os.environ.get("MIRRORCOUNT_UPDATE_GOLDEN"):
        path.write_text(text)
    assert text == path.read_text()


def test_golden_congruence_content():
    rep = json.loads((GOLDEN / "verify_congruence_hesse_l3_f7.json").read_text())
    assert set(rep) >= {"config", "counts", "differences", "ord_q", "verdicts", "assumptions"}
    assert rep["assumptions"] == ["smooth", "lifting-hypothesis-assumed"]
    # counts agree with the independent recurrence from N_1
    assert [int(c["N_X"]) for c in rep["counts"]] == oracles.elliptic_counts(7, 9, 4)
    assert all(isinstance(c["N_X"], str) for c in rep["counts"])
    assert rep["verdicts"]["overall"] == "pass" and rep["group_order"] == "9"


def test_golden_csv_and_zeta_shape():
    lines = (GOLDEN / "count_hesse_l0_f7.csv").read_text().splitlines()
    assert lines[0] == "k,N_k,provenance"
    assert [int(r.split(",")[1]) for r in lines[1:]] == oracles.elliptic_counts(7, 9, 3)
    z = json.loads((GOLDEN / "zeta_fit_hesse_l0_f7.json").read_text())
    assert z["ratio"]["numerator"] == ["1", "1", "7"]
    assert z["ratio"]["denominator"] == ["1", "-8", "7"]
    s = json.loads((GOLDEN / "smoothness_n2_f7.json").read_text())
    assert s["singular_lambdas"] == ["1", "2", "4"]
    h = json.loads((GOLDEN / "hodge_numbers_3_4.json").read_text())
    assert h["hodge"]["primitive"] == ["1", "19", "1"]


def test_exit_code_fail():
    # N_1 = 9 over F_7 is not 1 mod 7
    code, text = cli.run(["verify-unit", "--family", "dwork", "--p", "7", "--lambda", "3",
                          "--kmax", "2", "--no-cache"])
    assert code == 1 and json.loads(text)["verdicts"]["overall"] == "fail"
    code, _ = cli.run(["zeta-fit", "--p", "7", "--counts", "9,63,325,2331", "--genus", "1"])
    assert code == 1


def test_exit_code_inconclusive():
    code, text = cli.run(["zeta-fit", "--p", "7", "--counts", "9,63,324,2331"])
    assert code == 2 and json.loads(text)["ratio"]["status"] == "inconclusive"


def test_budget_error_reports_size(capsys):
    code, text = cli.run(["count", "--p", "7", "--kmax", "3", "--strategy", "naive", "--budget", "1000",
                          "--no-cache"])
    err = capsys.readouterr().err
    assert code == 2 and text == ""
    assert "budget exceeded" in err and "size" in err


def test_invalid_input_exit_2(capsys):
    assert cli.run(["count", "--p", "6"])[0] == 2
    assert cli.run(["verify-congruence", "--p", "7", "--lambda", "1", "--no-cache"])[0] == 2
    assert "singular" in capsys.readouterr().err


def test_unknown_flag():
    with pytest.raises(SystemExit) as exc:
        cli.run(["count", "--p", "7", "--bogus"])
    assert exc.value.code == 2


def test_singular_member_allowed():
    code, text = cli.run(["verify-congruence", "--p", "7", "--lambda", "1", "--kmax", "2",
                          "--allow-singular", "--no-cache"])
    rep = json.loads(text)
    assert code == 0 and rep["assumptions"][0] == "singular-member-allowed"


def test_quotient_both_methods():
    code, text = cli.run(["quotient-count", "--p", "7", "--lambda", "3", "--quotient-method", "both",
                          "--no-cache"])
    rep = json.loads(text)
    assert code == 0 and rep["counts"][0]["agree"] and rep["counts"][0]["N_k"] == "9"


def test_twisted_count():
    code, text = cli.run(["twisted-count", "--p", "7", "--lambda", "3", "--g", "1;2;4", "--kmax", "2"])
    assert code == 0
    assert [c["provenance"] for c in json.loads(text)["counts"]] == ["twisted-chart"] * 2


def test_newton_hodge_supersingular():
    code, text = cli.run(["newton-hodge", "--p", "5", "--lambda", "0", "--kmax", "2", "--no-cache"])
    rep = json.loads(text)
    assert code == 0 and rep["shape"] == "supersingular"
    code, text = cli.run(["newton-hodge", "--p", "5", "--n", "3", "--lambda", "1"])
    assert code == 0 and json.loads(text)["newton_comparison"] == "out-of-scope"


def test_cache_roundtrip_and_verify(tmp_path):
    argv = ["count", "--p", "7", "--lambda", "3", "--kmax", "2", "--cache-dir", str(tmp_path)]
    first = cli.run(argv)
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and len(files[0].read_text().splitlines()) == 2
    assert cli.run(argv) == first
    assert cli.run(argv + ["--verify-cache"]) == first
    # tamper with a value: verification over the full file must catch it
    lines = files[0].read_text().splitlines()
    recs = [json.loads(line) for line in lines]
    for r in recs:
        r["value"] = str(int(r["value"]) + 1)
    files[0].write_text("".join(json.dumps(r) + "\n" for r in recs))
    code, text = cli.run(argv + ["--verify-cache"])
    assert code == 1 and text == ""


def test_cache_corruption_warns(tmp_path):
    argv = ["count", "--p", "7", "--lambda", "3", "--kmax", "2", "--cache-dir", str(tmp_path)]
    good = cli.run(argv)
    path = next(tmp_path.iterdir())
    path.write_text(path.read_text() + "{not json\n")
    with pytest.warns(UserWarning, match="corrupt"):
        assert cli.run(argv) == good


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("MIRRORCOUNT_CACHE_DIR", str(tmp_path))
    cli.run(["count", "--p", "5", "--lambda", "2"])
    assert (tmp_path / "counts-p5-a1.jsonl").exists()


def test_worker_count_does_not_change_output():
    base = ["verify-congruence", "--p", "2", "--a", "2", "--lambda", "0,0", "--kmax", "2", "--no-cache"]
    assert cli.run(base + ["--workers", "1"]) == cli.run(base + ["--workers", "3"])


def test_output_file(tmp_path):
    out = tmp_path / "r.json"
    code, text = cli.run(["hodge-numbers", "--n", "2", "--d", "3", "--output", str(out)])
    assert code == 0 and out.read_text() == text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mirrorcount", "hodge-numbers", "--n", "4", "--d", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["hodge"]["primitive"] == ["1", "101", "101", "1"]

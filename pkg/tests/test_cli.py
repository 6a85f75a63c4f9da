import json
import subprocess
import sys
from pathlib import Path

import pytest

from hochcat.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def d(name):
    return str(DATA / name)


def run(capsys, *argv):
    status = main(list(argv))
    return status, capsys.readouterr().out


def run_json(capsys, *argv):
    status, out = run(capsys, *argv, "--json")
    doc = json.loads(out)
    assert doc["exit_status"] == status
    assert doc["schema_version"] == 1
    return status, doc


def test_validate_data_files(capsys):
    good = [d(n) for n in ("dual_numbers.json", "a2.json", "kronecker.json", "upper_triangular.json",
                           "pseudocircle.json", "pseudocircle_cover.json", "two_chain_augmentation.json",
                           "square_to_t.json", "square_to_2t.json")]
    status, out = run(capsys, "validate", *good)
    assert status == 0 and "INVALID" not in out


def test_validate_names_the_planted_defect(capsys):
    status, out = run(capsys, "validate", d("broken_kronecker.json"))
    assert status == 2
    assert "associativity" in out and "'y'" in out


def test_hh_dual_numbers(capsys):
    status, doc = run_json(capsys, "hh", d("dual_numbers.json"))
    assert status == 0
    assert [r["dim"] for r in doc["table"]] == [2, 1, 1, 1]
    assert not any(r["edge_caveat"] for r in doc["table"])
    assert len(doc["representatives"]["0"]) == 2


def test_hh_text_table(capsys):
    status, out = run(capsys, "hh", d("kronecker.json"), "--window", "2")
    assert status == 0
    lines = out.splitlines()
    assert lines[0] == "HH(kronecker) over rational"
    assert lines[1].split() == ["degree", "dim", "edge_caveat"]


def test_compare_with_opposite_and_mismatch(capsys):
    status, out = run(capsys, "compare", d("kronecker.json"), "--opposite")
    assert status == 0 and "verdict: equal" in out
    status, doc = run_json(capsys, "compare", d("dual_numbers.json"), d("a2.json"))
    assert status == 3 and doc["verdict"] == "different"


def test_mayer_vietoris(capsys):
    status, doc = run_json(capsys, "mv", d("pseudocircle.json"), d("pseudocircle_cover.json"))
    assert status == 0 and doc["verdict"] == "ok"
    assert doc["HC"]["X"][:3] == [1, 1, 0] == doc["direct_HC_X"][:3]
    assert doc["all_joints_exact"] and doc["matches_direct"]


def test_gs_compare(capsys):
    status, doc = run_json(capsys, "gs-compare", d("two_chain_augmentation.json"))
    assert status == 0 and doc["verdict"] == "equal"
    assert all(r["gs"] == r["incidence"] for r in doc["table"])


def test_deform(capsys):
    status, doc = run_json(capsys, "deform", d("dual_numbers.json"), "--cochain", d("square_to_t.json"))
    assert status == 0
    assert doc["deformation"]["status"] == "unobstructed"
    status, doc = run_json(capsys, "deform", d("dual_numbers.json"), "--cochain", d("square_to_t.json"),
                           "--against", d("square_to_2t.json"))
    # an inequivalent pair is an answer, not a failed check
    assert status == 0 and doc["equivalence"] == {"equivalent": False, "gauge_verified": False}
    status, doc = run_json(capsys, "deform", d("dual_numbers.json"), "--enumerate")
    assert status == 0


def test_suite_subset(capsys):
    status, doc = run_json(capsys, "suite", "--select", "2,4")
    assert status == 0
    assert [c["criterion"] for c in doc["criteria"]] == [2, 4]


def test_exit_codes_for_bad_requests(capsys, tmp_path):
    assert run(capsys, "hh", d("dual_numbers.json"), "--window", "9")[0] == 2
    assert run(capsys, "hh", d("kronecker.json"), "--max-dim", "5")[0] == 4
    assert run(capsys, "hh", d("dual_numbers.json"), "--scalars", "fp:2")[0] == 2
    assert run(capsys, "hh", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "hh", d("broken_kronecker.json"))[0] == 2
    assert run(capsys, "mv", d("dual_numbers.json"), d("pseudocircle_cover.json"))[0] == 2


def test_json_is_deterministic_and_out_writes_a_file(capsys, tmp_path):
    _, first = run(capsys, "mv", d("pseudocircle.json"), d("pseudocircle_cover.json"), "--json")
    _, second = run(capsys, "mv", d("pseudocircle.json"), d("pseudocircle_cover.json"), "--json")
    assert first == second
    out = tmp_path / "r.json"
    assert main(["mv", d("pseudocircle.json"), d("pseudocircle_cover.json"), "--json", "--out", str(out)]) == 0
    assert out.read_text() == first


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "hochcat.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("hochcat ")


@pytest.mark.parametrize("argv", [[], ["hh"], ["frobnicate"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2

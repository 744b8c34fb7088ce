import json
import subprocess
import sys

import pytest

from partialbases.cli import dumps, main, run
from partialbases.instances import four_points_two_fibers
from partialbases.topology import octahedron


def code_of(*argv):
    return run(list(argv))[1]


def test_decide_basis():
    report, code = run(["decide-basis", "--n", "2", "--words", "a b a^-1 b^-1"])
    assert code == 0 and report["result"]["partial_basis"] is False
    report, code = run(["decide-basis", "--n", "2", "--words", "a b, b", "--oracle"])
    assert code == 0 and report["result"]["partial_basis"] is True


def test_report_envelope():
    report, _ = run(["minimize", "--n", "2", "--words", "a b"])
    assert report["schema_version"] == 1 and report["exit_code"] == 0
    assert "config" in report and "version" in report


def test_verify_exit_codes():
    assert code_of("verify", "--theorem", "2.11", "--n", "3", "--l", "0") == 0
    assert code_of("verify", "--theorem", "2.11", "--n", "3", "--l", "1") == 3


def test_bad_words_exit_input():
    assert code_of("decide-basis", "--n", "2", "--words", "c") == 3
    assert code_of("decide-basis", "--n", "2", "--words", "a*b") == 3


def test_extend_basis_failure_exit():
    assert code_of("extend-basis", "--n", "2", "--words", "a^2") == 1
    report, code = run(["extend-basis", "--n", "2", "--words", "a b"])
    assert code == 0


def test_stabilizer_auto_minimizes():
    report, code = run(["stabilizer", "--n", "2", "--words", "a b"])
    assert code == 0


def test_budget_exit():
    assert code_of("pb", "build", "--n", "3", "--L", "9") == 2


def test_homology_from_file(tmp_path):
    p = tmp_path / "oct.json"
    p.write_text(json.dumps(octahedron().to_json()))
    report, code = run(["homology", "--complex", str(p)])
    assert code == 0 and report["result"]["homology"]["2"]["rank"] == 1


def test_malformed_json_location(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"vertices": [1, 2,\n  ]}')
    report, code = run(["homology", "--complex", str(p)])
    assert code == 3 and f"{p}:2:" in report["error"]


def test_quillen_basis_from_files(tmp_path):
    inst = four_points_two_fibers()
    kp, mp = tmp_path / "k.json", tmp_path / "f.json"
    kp.write_text(json.dumps(inst.K.to_json()))
    mp.write_text(json.dumps(inst.f.to_json()))
    report, code = run(["quillen", "basis", "--map", str(mp), "--complex", str(kp), "--n", "0"])
    assert code == 0, report
    assert report["result"]["certificate"]["unimodular"]
    report, code = run(["quillen", "check", "--map", str(mp), "--n", "0"])
    assert code == 0 and report["result"]["verdict"] == "pass"


def test_json_file_matches_stdout(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["pb", "experiment", "--n", "2", "--L", "2", "--json", str(out)]) == 0
    printed = capsys.readouterr().out
    assert printed == out.read_text()
    assert "truncated evidence" in printed


@pytest.mark.parametrize(
    "argv",
    [
        ["quillen", "suite", "--count", "12", "--seed", "5"],
        ["pb", "build", "--n", "2", "--L", "3"],
    ],
)
def test_deterministic_bytes(argv):
    assert dumps(run(argv)[0]) == dumps(run(argv)[0])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "partialbases", "decide-basis", "--n", "2", "--words", "a"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["partial_basis"] is True

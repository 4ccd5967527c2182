import json
import subprocess
import sys

import pytest

from qms.cli import main
from qms.instance import Dims, generate, instance_to_json, load_instance, save_instance
from qms.rank_range import direct_report
from qms.seven_decomp import decompose_instance

DIMS = "3,3,2,2,1,2,1,2"


def _gen(tmp_path, mode, seed=4, name="inst.json"):
    path = tmp_path / name
    assert main(["gen", "--dims", DIMS, "--mode", mode, "--seed", str(seed), "--output", str(path)]) == 0
    return path


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_is_deterministic(tmp_path):
    a = _gen(tmp_path, "raw", 11, "a.json").read_bytes()
    b = _gen(tmp_path, "raw", 11, "b.json").read_bytes()
    assert a == b
    assert _gen(tmp_path, "raw", 12, "c.json").read_bytes() != a


def test_save_load_round_trip(tmp_path):
    path = _gen(tmp_path, "consistent-four")
    again = tmp_path / "again.json"
    save_instance(load_instance(str(path)), str(again))
    assert again.read_bytes() == path.read_bytes()


def test_zero_denominator_is_rejected_with_location(tmp_path, capsys):
    inst, _ = generate(0, Dims.parse(DIMS))
    doc = instance_to_json(inst)
    doc["B"]["entries"][1][0][2] = "1/0"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = _run(capsys, "decompose", "--input", str(path))
    assert code == 1
    assert "B.entries[1][0][2]" in err


def test_dimension_mismatch_names_both_sides(tmp_path, capsys):
    inst, _ = generate(0, Dims(2, 3, 1, 1, 1, 1, 1, 1))
    doc = instance_to_json(inst)
    doc["E"] = {"rows": 1, "cols": 4, "entries": [[["0", "0", "0", "0"]] * 4]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = _run(capsys, "verify", "--input", str(path))
    assert code == 1 and "A.cols vs E.cols" in err


def test_missing_file_and_bad_json(tmp_path, capsys):
    assert _run(capsys, "decompose", "--input", str(tmp_path / "nope.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run(capsys, "decompose", "--input", str(bad))[0] == 1


def test_bad_seed_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QMS_SEED", "abc")
    assert _run(capsys, "gen", "--dims", DIMS)[0] == 1


@pytest.mark.parametrize("eq", ["three", "four"])
def test_solve_consistent(tmp_path, capsys, eq):
    path = _gen(tmp_path, f"consistent-{eq}")
    code, out, _ = _run(capsys, "solve", "--input", str(path), "--eq", eq, "--sample", "3")
    doc = json.loads(out)
    assert code == 0 and doc["residual"] == "0" and doc["consistency"]["consistent"]
    assert len(doc["samples"]) == 3


def test_solve_inconsistent(tmp_path, capsys):
    inst, _ = generate(2, Dims(4, 4, 1, 0, 0, 1, 0, 0), "raw")
    path = tmp_path / "inc.json"
    save_instance(inst, str(path))
    code, out, _ = _run(capsys, "solve", "--input", str(path), "--eq", "three")
    doc = json.loads(out)
    assert code == 2 and not doc["consistency"]["consistent"]
    assert doc["consistency"]["failed_conditions"]


def test_decompose_and_verify(tmp_path, capsys):
    path = _gen(tmp_path, "raw")
    code, out, _ = _run(capsys, "decompose", "--input", str(path))
    doc = json.loads(out)
    assert code == 0 and doc["checks"]["passed"]
    code, out, _ = _run(capsys, "verify", "--input", str(_gen(tmp_path, "consistent-three", name="c.json")))
    doc = json.loads(out)
    assert code == 0 and doc["identities"]["passed"] and doc["consistency"]["three"]["consistent"]


def test_rank_range_then_sample_sandwich(tmp_path, capsys):
    path = _gen(tmp_path, "consistent-three", seed=21)
    code, out, _ = _run(capsys, "rank-range", "--input", str(path), "--eq", "three")
    reports = {r["unknown"]: r for r in json.loads(out)["reports"]}
    assert code == 0 and all(r["paths_agree"] for r in reports.values())
    code, out, _ = _run(capsys, "solve", "--input", str(path), "--eq", "three", "--sample", "30")
    for s in json.loads(out)["samples"]:
        for u, r in s["ranks"].items():
            assert reports[u]["min"] <= r <= reports[u]["max"]
    inst = load_instance(str(path))
    direct = direct_report(inst, "three", "Z", decompose_instance(inst))
    assert (reports["Z"]["min"], reports["Z"]["max"]) == (direct.min, direct.max)


def test_rank_range_rejects_wrong_unknown(tmp_path, capsys):
    path = _gen(tmp_path, "consistent-three")
    assert _run(capsys, "rank-range", "--input", str(path), "--eq", "three", "--var", "W")[0] == 1


def test_reports_are_byte_identical(tmp_path):
    path = _gen(tmp_path, "consistent-four")
    outs = []
    for k in range(2):
        target = tmp_path / f"out{k}.json"
        assert main(["solve", "--input", str(path), "--eq", "four", "--sample", "2",
                     "--seed", "5", "--output", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point(tmp_path):
    path = _gen(tmp_path, "consistent-three")
    proc = subprocess.run([sys.executable, "-m", "qms.cli", "verify", "--input", str(path)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["decomposition"]["passed"]

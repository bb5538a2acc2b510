import json
import subprocess
import sys

import pytest

from condisc.cli import main
from condisc.tower import cantor


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_locconst_passes_on_cantor(capsys):
    code, out = run_json(capsys, "check-discrete", "--tower", "cantor", "--depth", "3", "--presheaf", "locconst:2")
    assert code == 0
    assert out["verdict"] == "pass" and out["consistent"]
    assert [r["oracle"] for r in out["reports"]] == ["counit", "colimit"]


def test_towerhom_fails_with_identity(capsys):
    code, out = run_json(capsys, "check-discrete", "--tower", "cantor", "--depth", "3", "--presheaf", "towerhom:cantor")
    assert code == 1
    assert out["consistent"]
    assert out["witness"]["label"] == "identity tower map"


def test_point_tower_passes(capsys):
    code, text, _ = run(capsys, "check-discrete", "--tower", "point", "--presheaf", "locconst:3")
    assert code == 0
    assert "consistent: yes" in text and text.rstrip().endswith("verdict: pass")


def test_budget_exhaustion_is_inconclusive(capsys):
    code, out = run_json(capsys, "check-discrete", "--tower", "cantor", "--depth", "4",
                         "--presheaf", "locconst:2", "--budget", "500")
    assert code == 2 and out["verdict"] == "inconclusive"


def test_module_spec_adds_module_report(capsys):
    code, out = run_json(capsys, "check-discrete", "--tower", "cantor", "--depth", "2",
                         "--presheaf", "locconst-mod:z2:regular")
    assert code == 0
    assert [r["oracle"] for r in out["reports"]] == ["counit", "colimit", "colimit-module"]


def test_tower_from_file(capsys, tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps(cantor(2).to_json()))
    code, out = run_json(capsys, "check-discrete", "--tower", str(path), "--presheaf", "locconst:2", "--depth", "5")
    assert code == 0 and out["depth"] == 2


@pytest.mark.parametrize("argv", [
    ["check-discrete", "--tower", "nowhere", "--presheaf", "locconst:2"],
    ["check-discrete", "--tower", "cantor", "--presheaf", "bogus:1"],
    ["check-discrete", "--tower", "cantor"],
    ["check-discrete", "--tower", "cantor", "--presheaf", "locconst:2", "--depth", "-1"],
    ["check-discrete", "--tower", "cantor", "--presheaf", "locconst-mod:z2"],
    ["frobnicate"],
    [],
])
def test_malformed_input_exits_64(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 64
    assert err.startswith("condisc:")


def test_bad_tower_file_exits_64(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"levels": [1, 2], "transitions": [[0, 5]]}))
    code, _, _ = run(capsys, "check-discrete", "--tower", str(path), "--presheaf", "locconst:2")
    assert code == 64
    path.write_text("{not json")
    code, _, _ = run(capsys, "check-discrete", "--tower", str(path), "--presheaf", "locconst:2")
    assert code == 64


@pytest.mark.parametrize("tower,depth,count", [("cantor", 2, 15), ("eventually_constant:3", 3, 5), ("point", 2, 1)])
def test_inspect_counts(capsys, tower, depth, count):
    code, out = run_json(capsys, "inspect", "--tower", tower, "--depth", str(depth))
    assert code == 0
    assert out["quotient_count"] == count
    assert out["limit_cone"]["ok"]
    assert out["kan_initial"] is True


def test_partitions(capsys):
    code, out = run_json(capsys, "partitions", "--n", "5")
    assert code == 0 and out["count"] == 52
    assert len({tuple(p) for p in out["partitions"]}) == 52


def test_replay_reproduces_failure(capsys, tmp_path):
    model = tmp_path / "model.json"
    model.write_text(json.dumps(cantor(3).to_json()))
    rfile = tmp_path / "repro.json"
    code, _, _ = run(capsys, "check-discrete", "--tower", "cantor", "--depth", "2",
                     "--presheaf", f"towerhom:{model}", "--replay-file", str(rfile))
    assert code == 1 and rfile.exists()
    model.unlink()  # the reproduction file carries its own copy
    code, out = run_json(capsys, "replay", str(rfile))
    assert code == 0 and out["reproduced"]
    data = json.loads(rfile.read_text())
    data["expected"]["verdict"] = "pass"
    rfile.write_text(json.dumps(data))
    code, out = run_json(capsys, "replay", str(rfile))
    assert code == 1 and not out["reproduced"]


def test_no_replay_file_on_pass(capsys, tmp_path):
    rfile = tmp_path / "repro.json"
    code, _, _ = run(capsys, "check-discrete", "--tower", "point", "--presheaf", "locconst:2", "--replay-file", str(rfile))
    assert code == 0 and not rfile.exists()


def test_replay_rejects_garbage(capsys, tmp_path):
    rfile = tmp_path / "repro.json"
    rfile.write_text(json.dumps({"command": "check-discrete"}))
    assert run(capsys, "replay", str(rfile))[0] == 64


def test_verify_only_and_broken(capsys):
    code, out = run_json(capsys, "verify", "--only", "functoriality", "partition_lattice")
    assert code == 0 and [c["name"] for c in out["checks"]] == ["partition_lattice", "functoriality"]
    code, out = run_json(capsys, "verify", "--only", "functoriality", "--include-broken")
    assert code == 1
    assert out["checks"][0]["failures"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "condisc", "partitions", "--n", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "5 partitions" in proc.stdout

import io
import json
import subprocess
import sys

import numpy as np
import pytest

from stateffect.cli import run
from stateffect.jsonio import matrix_to_json
from stateffect.quantum import bell_state


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def files(tmp_path):
    f = {}
    f["w"] = write(tmp_path / "w.json", {"points": ["(a,0)", "(b,1)"], "probs": [0.5, 0.5]})
    f["v"] = write(tmp_path / "v.json", {"points": ["(a,0)", "(a,1)", "(b,0)", "(b,1)"],
                                         "probs": [0.25, 0.25, 0.25, 0.25]})
    f["bell"] = write(tmp_path / "bell.json", matrix_to_json(bell_state().data))
    f["prod"] = write(tmp_path / "prod.json", matrix_to_json(np.eye(4) / 4))
    f["line"] = write(tmp_path / "line.json", {"points": ["a", "b", "c"],
                                               "d": [[0, 0.5, 1], [0.5, 0, 0.5], [1, 0.5, 0]]})
    f["da"] = write(tmp_path / "da.json", {"points": ["a", "b", "c"], "probs": [1, 0, 0]})
    f["dc"] = write(tmp_path / "dc.json", {"points": ["a", "b", "c"], "probs": [0, 0, 1]})
    f["p"] = write(tmp_path / "p.json", {"points": ["x", "y"], "values": [0.3, 0.3]})
    f["q"] = write(tmp_path / "q.json", {"points": ["x", "y"], "values": [0.7, 0.7]})
    f["e"] = write(tmp_path / "e.json", matrix_to_json(np.diag([0.2, 0.5])))
    f["d"] = write(tmp_path / "d.json", matrix_to_json(np.diag([0.6, 0.5])))
    f["bad"] = write(tmp_path / "bad.json", {"points": ["a", "b"], "probs": [0.5, 0.6]})
    return f


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_tvd_of_entwined_state(files):
    assert call("tvd", files["w"], files["v"]) == (0, "0.5\n", "")


def test_trace_distance_of_bell_state(files):
    assert call("trd", files["bell"], files["prod"])[:2] == (0, "0.75\n")
    assert call("vld", files["bell"], files["prod"])[:2] == (0, "0.75\n")


def test_entwine_both_kinds(files):
    assert call("entwine", files["w"])[:2] == (0, "0.5\n")
    assert call("entwine", files["bell"], "--dims", "2", "2")[:2] == (0, "0.75\n")
    code, _, err = call("entwine", files["bell"])
    assert code == 1 and "DimensionMismatch" in err
    code, _, err = call("entwine", files["da"])
    assert code == 1 and "NotAProductSpace" in err


def test_kvd_with_metric_and_plan(files):
    assert call("kvd", files["da"], files["dc"], "--metric", files["line"])[:2] == (0, "1\n")
    assert call("kvd", files["da"], files["dc"])[:2] == (0, "1\n")
    code, out, _ = call("kvd", files["da"], files["dc"], "--metric", files["line"], "--plan")
    doc = json.loads(out)
    assert code == 0 and doc["plan"][0][2] == 1.0 and doc["kvd"] == 1.0


def test_json_output(files):
    code, out, _ = call("tvd", files["w"], files["v"], "--json")
    assert code == 0 and json.loads(out) == {"tvd": 0.5}


def test_ard_command(files):
    code, out, _ = call("ard", "--model", "fuzzy", files["p"], files["q"])
    doc = json.loads(out)
    assert code == 0 and doc["agree"] and abs(doc["ard"] - 0.4) < 1e-8 and doc["direct"] == 0.4
    doc = json.loads(call("ard", "--model", "matrix", files["e"], files["d"])[1])
    assert doc["agree"] and doc["direct"] == pytest.approx(0.4)
    code, _, _ = call("ard", "--model", "fuzzy", files["p"], files["e"])
    assert code == 1


def test_witness_command(files):
    doc = json.loads(call("witness", files["w"], files["v"])[1])
    assert doc["gap"] == 0.5 and doc["values"] == [1.0, 0.0, 0.0, 1.0]
    doc = json.loads(call("witness", files["da"], files["dc"], "--metric", files["line"])[1])
    assert doc["gap"] == 1.0 and doc["values"][0] == 1.0
    doc = json.loads(call("witness", files["bell"], files["prod"])[1])
    assert doc["gap"] == 0.75 and doc["dim"] == 4


def test_exit_codes(files):
    assert call("tvd", files["bad"], files["w"])[0] == 1
    assert call("tvd", files["w"], "missing.json")[0] == 1
    assert call("trd", files["w"], files["bell"])[0] == 1
    assert call("nosuchverb")[0] == 2
    assert call("tvd", files["w"])[0] == 2
    assert call("verify", "--suite", "nosuch")[0] == 2
    assert call("verify", "--seed", "-1")[0] == 2


def test_verify_is_deterministic_for_a_seed():
    first = call("verify", "--seed", "42", "--suite", "transport")
    second = call("verify", "--seed", "42", "--suite", "transport")
    assert first == second and first[0] == 0
    assert "4/4 checks passed" in first[1]


def test_verify_failure_exit_code(monkeypatch):
    from stateffect import verify

    failing = verify.Check("transport", "always-fails", 1, 0.0, lambda rng, k, t: t.holds(False, "forced"))
    monkeypatch.setattr(verify, "REGISTRY", verify.REGISTRY + [failing])
    code, out, _ = call("verify", "--suite", "transport", "--json")
    doc = json.loads(out)
    assert code == 3 and not doc["ok"]
    assert doc["checks"][-1]["first_failure"] == "case 0: forced"


def test_triangle_verify_emits_json():
    code, out, _ = call("triangle-verify", "--size", "3", "--trials", "5", "--seed", "2")
    doc = json.loads(out)
    assert code == 0 and doc["ok"] and doc["classical"]["size"] == 3


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "stateffect", "tvd", files["w"], files["v"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "0.5\n"

import io
import json
import subprocess
import sys

import pytest

from qiso_workbench.cli import run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_spheres_json():
    code, out, _ = invoke("spheres", "--group", "free:2", "--max-n", "4")
    assert code == 0
    report = json.loads(out)
    assert [s["size"] for s in report["spheres"]] == [1, 4, 12, 36, 108]
    assert report["command"] == ["qiso", "spheres", "--group", "free:2", "--max-n", "4"]
    assert report["version"]


def test_spheres_csv():
    code, out, _ = invoke("spheres", "--group", "cyclic:6", "--format", "csv")
    assert code == 0
    assert out == "n,size\n0,1\n1,2\n2,2\n3,1\n"


def test_verify_preset_pauli():
    code, out, _ = invoke("verify-preset", "z4_pauli")
    assert code == 0
    report = json.loads(out)
    assert all(r["ok"] for r in report["relations"]["relations"])
    assert report["noncommutativity_witness"]["nonzero"]


def test_verify_failure_names_relation(tmp_path):
    pres = tmp_path / "bad.pres"
    pres.write_text("generators: A\nrelations:\n  A A* = A* A\n  A = 1\n")
    model = tmp_path / "m.json"
    model.write_text(json.dumps({"root_order": 4, "dim": 1, "assign": {"A": [["z(4,1)"]]}}))
    code, out, _ = invoke("verify", "--presentation", str(pres), "--model", str(model))
    assert code == 1
    failing = [r for r in json.loads(out)["check"]["relations"] if not r["ok"]]
    assert [r["relation"] for r in failing] == ["A = 1"]
    assert failing[0]["residual_norm"] == "2"


def test_parse_error_exit_code(tmp_path):
    pres = tmp_path / "broken.pres"
    pres.write_text("generators: A\nrelations:\n  A +\n")
    model = tmp_path / "m.json"
    model.write_text(json.dumps({"dim": 1, "assign": {"A": [["1"]]}}))
    code, _, err = invoke("verify", "--presentation", str(pres), "--model", str(model))
    assert code == 2
    assert "broken.pres:3:" in err


def test_usage_errors(capsys):
    assert run(["no-such-command"]) == 2
    assert "usage" in capsys.readouterr().err
    assert run(["spheres", "--group", "free:2", "--bogus"]) == 2
    code, _, err = invoke("heat-trace", "--group", "free:2", "--t", "1", "--max-n", "2", "--format", "csv")
    assert code == 2 and "csv" in err
    code, _, _ = invoke("spheres", "--group", "free:2")
    assert code == 2


def test_cap_exceeded_is_a_usage_error(monkeypatch):
    monkeypatch.setenv("QISO_BALL_CAP", "4")
    code, _, err = invoke("spheres", "--group", "free:2", "--max-n", "5")
    assert code == 2 and "QISO_BALL_CAP" in err


def test_laplacian_finite_dihedral_reports_failure():
    code, out, _ = invoke("laplacian", "finite", "--group", "s3:dihedral")
    assert code == 1
    assert json.loads(out)["flags"]["constant_on_spheres"] is False


def test_laplacian_free_csv():
    code, out, _ = invoke("laplacian", "free", "--rank", "2", "--max-len", "3", "--format", "csv")
    assert code == 0
    assert out == "length,c\n0,0\n1,1\n2,10/3\n3,65/9\n"


def test_heat_trace_floats_are_rounded():
    code, out, _ = invoke("heat-trace", "--group", "cyclic:3", "--t", "1", "--max-n", "3")
    assert code == 0
    assert '"value": 1.73575888234288' in out


def test_t_operator_and_real_check():
    code, out, _ = invoke("t-operator", "--group", "free:2", "--g", "ab", "--h", "B")
    assert code == 0 and json.loads(out)["stable"]
    code, _, _ = invoke("t-operator", "--group", "freeabelian:2", "--g", "a", "--h", "a")
    assert code == 1
    code, out, _ = invoke("real-check", "--preset", "zn", "5")
    assert code == 0


def test_action_check_closed_form():
    code, out, _ = invoke("action-check", "--preset", "zn", "5")
    assert code == 0
    assert json.loads(out)["closed_form"]["ok"]


def test_presets_listing():
    code, out, _ = invoke("presets")
    names = [p["name"] for p in json.loads(out)["presets"]]
    assert "f2_torus" in names and "z4_pauli" in names


@pytest.mark.parametrize(
    "argv",
    [
        ("verify-preset", "s3_dihedral"),
        ("laplacian", "free", "--rank", "2", "--max-len", "2"),
        ("heat-trace", "--group", "free:2", "--t", "0.5", "--max-n", "6"),
    ],
)
def test_reports_are_byte_identical(argv):
    assert invoke(*argv) == invoke(*argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qiso_workbench", "spheres", "--group", "cyclic:4", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "n,size\n0,1\n1,2\n2,1\n"

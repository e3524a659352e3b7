import json
import subprocess
import sys

import pytest

from grassmann_hodge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_algebra_passes(capsys):
    code, data = run_json(capsys, "algebra", "--dim", "4")
    assert code == 0
    assert {c["verdict"] for c in data["checks"]} == {"PASS"}
    assert len(data["table"]) == 16


def test_algebra_single_check(capsys):
    code, data = run_json(capsys, "algebra", "--dim", "3", "--check", "double-complement")
    assert code == 0
    assert [c["check"] for c in data["checks"]] == ["double-complement"]


def test_algebra_complement_table(capsys):
    code, out, _ = run(capsys, "algebra", "--dim", "3")
    assert code == 0
    assert "e1^e2^e3" in out


@pytest.mark.parametrize("dim", ["0", "9", "three"])
def test_algebra_bad_dimension_is_usage_error(capsys, dim):
    code, _, err = run(capsys, "algebra", "--dim", dim)
    assert code == 2
    assert err


def test_star_minkowski(capsys):
    code, data = run_json(capsys, "star", "--sig", "+---")
    assert code == 0
    assert data["det_sign"] == -1
    two_forms = [r for r in data["table"] if r["grade"] == 2]
    assert len(two_forms) == 6 and {r["star_star"] for r in two_forms} == {-1}
    assert all(r["star_star"] == r["expected"] for r in data["table"])


def test_star_orientation_flag(capsys):
    _, plus = run_json(capsys, "star", "--sig", "+++")
    _, minus = run_json(capsys, "--orientation", "-1", "star", "--sig", "+++")
    assert minus["orientation"] == -1
    assert plus["table"][1]["star"] == "dx2^dx3"
    assert minus["table"][1]["star"] == "-dx2^dx3"


def test_star_bad_signature_is_parse_error(capsys):
    code, _, err = run(capsys, "star", "--sig", "+-+?")
    assert code == 3
    assert "parse error" in err


@pytest.mark.parametrize("formulation", ["premetric", "metric", "classical", "minkowski"])
def test_maxwell_fixtures(capsys, formulation):
    code, _, _ = run(capsys, "maxwell", "--config", "electrostatic.cfg", "--formulation", formulation)
    assert code == 0
    code, out, _ = run(capsys, "maxwell", "--config", "nonconserved.cfg", "--formulation", formulation)
    assert code == 1
    assert "FAIL" in out


def test_maxwell_units_override(capsys):
    code, data = run_json(capsys, "maxwell", "--config", "electrostatic.cfg", "--units", "gaussian")
    assert code == 1
    assert any("pi" in r["residual"] for r in data["residuals"])
    assert run(capsys, "maxwell", "--config", "electrostatic_gaussian.cfg")[0] == 0


def test_maxwell_missing_file_is_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "maxwell", "--config", str(tmp_path / "absent.cfg"))
    assert code == 4
    assert "error" in err


def test_maxwell_bad_config_is_parse_error(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[E]\n1 = x1 +\n")
    code, _, err = run(capsys, "maxwell", "--config", str(cfg))
    assert code == 3
    assert "[E] 1" in err


def test_betti_torus(capsys):
    code, data = run_json(capsys, "betti", "torus")
    assert code == 0
    assert [r["harmonic"] for r in data["rows"]] == [1, 2, 1]
    assert all(r["equal"] and r["gap_ok"] for r in data["rows"])
    assert data["euler"]["betti"] == data["euler"]["counts"] == 0


def test_betti_mesh_file(capsys, tmp_path):
    mesh = tmp_path / "square.sc"
    mesh.write_text("simplices\n0 1\n1 2\n2 3\n3 0\n")
    code, data = run_json(capsys, "betti", str(mesh))
    assert code == 0
    assert [r["harmonic"] for r in data["rows"]] == [1, 1]


def test_betti_malformed_mesh_reports_line(capsys, tmp_path):
    mesh = tmp_path / "bad.sc"
    mesh.write_text("simplices\n0 1\n1 q\n")
    code, _, err = run(capsys, "betti", str(mesh))
    assert code == 3
    assert ":3:" in err


def test_decompose_cycle(capsys):
    code, data = run_json(capsys, "decompose", "hollow_triangle", "cycle")
    assert code == 0
    assert data["norms"]["exact"] == data["norms"]["coexact"] == 0
    assert data["norms"]["harmonic"] == pytest.approx(3**0.5)
    code, fdata = run_json(capsys, "decompose", "hollow_triangle", "cycle", "--float")
    assert code == 0 and not fdata["exact"]
    assert fdata["norms"]["harmonic"] == pytest.approx(3**0.5)


def test_decompose_cochain_off_mesh_is_parse_error(capsys, tmp_path):
    mesh = tmp_path / "edge.sc"
    mesh.write_text("simplices\n0 1\n")
    code, _, err = run(capsys, "decompose", str(mesh), "cycle")
    assert code == 3
    assert "not a 1-simplex" in err


def test_global_flags_after_subcommand(capsys):
    code, data = run_json(capsys, "algebra", "--dim", "2", "--seed", "5")
    assert code == 0 and data["seed"] == 5
    code, out, _ = run(capsys, "--json", "--seed", "5", "algebra", "--dim", "2")
    assert json.loads(out)["seed"] == 5


def test_bad_orientation_is_usage_error(capsys):
    assert run(capsys, "--orientation", "2", "star", "--sig", "++")[0] == 2


def test_missing_subcommand(capsys):
    assert run(capsys)[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["algebra", "--dim", "5", "--seed", "3"],
        ["star", "--sig", "+-+-"],
        ["maxwell", "--config", "electrostatic.cfg", "--formulation", "classical"],
        ["betti", "octahedron"],
        ["decompose", "hollow_triangle", "cycle", "--float"],
    ],
)
def test_deterministic_output(argv):
    for extra in ([], ["--json"]):
        outs = [
            subprocess.run([sys.executable, "-m", "grassmann_hodge", *argv, *extra], capture_output=True, check=False).stdout
            for _ in range(2)
        ]
        assert outs[0] == outs[1] and outs[0]
        if extra:
            json.loads(outs[0])

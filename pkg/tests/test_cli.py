import json

import pytest

from wopskit.cli import main

TRIANGLE = {"type": "simplex_jacobi", "alpha0": ["0", "0"], "beta": "0"}
APPELL_TYPE = {"type": "sum", "terms": [TRIANGLE, {"type": "point_mass", "location": ["0", "0"], "weight": "1"}]}
LJ = {"type": "laguerre_jacobi", "a": ["0", "0"]}


def run(tmp_path, capsys, config, *args):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(config))
    code = main([args[0], *args[1:], "--config", str(path)])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_appell(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"functional": TRIANGLE, "pair": "appell", "max_degree": 4}, "classify")
    doc = json.loads(out)
    assert code == 0
    assert (doc["s"], doc["det_condition"], doc["status"]) == (0, "1/48", "pass")


@pytest.mark.parametrize("selector", ["appell_type:1", "appell_type:2"])
def test_classify_appell_type(tmp_path, capsys, selector):
    code, out, _ = run(tmp_path, capsys, {"functional": APPELL_TYPE, "pair": selector}, "classify")
    assert code == 0 and json.loads(out)["s"] == 1


def test_classify_mismatched_pair(tmp_path, capsys):
    cfg = {"functional": TRIANGLE, "pair": {"builder": "example2", "a": ["0", "0"]}, "max_degree": 3}
    code, out, _ = run(tmp_path, capsys, cfg, "classify")
    doc = json.loads(out)
    assert code == 1
    assert not doc["residuals_zero"] and doc["failures"]


def test_verify_appell(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"functional": TRIANGLE, "pair": "appell"}, "verify", "--degree", "4")
    doc = json.loads(out)
    assert code == 0, doc["violations"]
    assert doc["violations"] == [] and all(c["ok"] for c in doc["checks"])


def test_verify_point_mass(tmp_path, capsys):
    cfg = {
        "functional": {"type": "point_mass", "location": ["0", "0"]},
        "pair": {"phi": [["x1^2", "0"], ["0", "x2^2"]], "psi": ["x1", "x2"]},
        "max_degree": 3,
    }
    code, out, _ = run(tmp_path, capsys, cfg, "verify")
    doc = json.loads(out)
    assert code == 1
    assert {"check": "quasi_definite", "message": "NotQuasiDefinite(1)"} in doc["violations"]


def test_verify_mismatched_reports_violations(tmp_path, capsys):
    cfg = {"functional": TRIANGLE, "pair": {"builder": "example2_wedge", "a": ["0", "0"]}, "max_degree": 2}
    code, out, _ = run(tmp_path, capsys, cfg, "verify")
    doc = json.loads(out)
    assert code == 1 and doc["status"] == "fail"
    assert all({"check", "message"} <= set(v) for v in doc["violations"])


def test_explore_downgrades_band_violations(tmp_path, capsys):
    cfg = {"functional": TRIANGLE, "pair": {"builder": "example2_wedge", "a": ["0", "0"]}, "max_degree": 3}
    _, strict_out, _ = run(tmp_path, capsys, cfg, "verify")
    _, explore_out, _ = run(tmp_path, capsys, cfg, "verify", "--mode", "explore")
    strict, explore = json.loads(strict_out), json.loads(explore_out)
    band = [v for v in strict["violations"] if "predicted band" in v["message"]]
    assert band
    assert not [v for v in explore["violations"] if "predicted band" in v["message"]]
    assert explore["warnings"]


def test_inline_pair_matches_builder(tmp_path, capsys):
    cfg = {
        "functional": TRIANGLE,
        "pair": {"phi": [["x1^2 - x1", "x1*x2"], ["x1*x2", "x2^2 - x2"]], "psi": ["3*x1 - 1", "3*x2 - 1"]},
        "max_degree": 3,
    }
    code, out, _ = run(tmp_path, capsys, cfg, "classify")
    assert code == 0 and json.loads(out)["semiclassical"]


def test_export_moments(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"functional": TRIANGLE, "max_degree": 2}, "export", "moments")
    assert code == 0
    assert json.loads(out)["moments"]["m_1_0"] == "1/3"


def test_export_wops(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"functional": TRIANGLE, "max_degree": 2}, "export", "wops")
    assert code == 0
    assert json.loads(out)["P"]["1"] == ["x1 - 1/3", "x2 - 1/3"]


def test_export_ddr_lambda_zero(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"functional": TRIANGLE, "max_degree": 3}, "export", "ddr")
    doc = json.loads(out)
    assert code == 0
    for n, entry in doc["ddr"].items():
        assert all(e == "0" for row in entry["Lambda"]["0"] for e in row)
        assert "N1" in entry or int(n) == 0


@pytest.mark.parametrize("what", ["recurrence", "structure"])
def test_export_other(tmp_path, capsys, what):
    code, out, _ = run(tmp_path, capsys, {"functional": TRIANGLE, "max_degree": 2}, "export", what)
    assert code == 0 and what in json.loads(out)


def test_export_is_byte_stable(tmp_path, capsys):
    cfg = {"functional": APPELL_TYPE, "pair": "appell_type:1", "max_degree": 2}
    outs = [run(tmp_path, capsys, cfg, "export", "structure")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    out_file = tmp_path / "o.json"
    run(tmp_path, capsys, cfg, "export", "structure", "--out", str(out_file))
    assert out_file.read_text() == outs[0]


@pytest.mark.parametrize(
    "cfg,args",
    [
        ({"functional": TRIANGLE}, ("export", "bogus")),
        ({"functional": {"type": "nope"}}, ("classify",)),
        ({"functional": TRIANGLE, "pair": "mystery"}, ("classify",)),
        ({"functional": TRIANGLE, "max_degree": 0}, ("classify",)),
        ({"functional": TRIANGLE, "mode": "fast"}, ("verify",)),
        ({"functional": LJ, "pair": "appell"}, ("classify",)),
        ({"functional": TRIANGLE, "pair": {"phi": [["x1^"]], "psi": ["x1"]}}, ("classify",)),
    ],
)
def test_config_errors_exit_2(tmp_path, capsys, cfg, args):
    code, _, err = run(tmp_path, capsys, cfg, *args)
    assert code == 2 and "configuration error" in err


def test_usage_errors_exit_2(tmp_path, capsys):
    assert main([]) == 2
    assert main(["classify", "--config", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", "--config", str(bad)]) == 2


def test_verify_appell_degree_6(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"functional": TRIANGLE, "pair": "appell", "max_degree": 6}, "verify")
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_verify_wedge_pair(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"functional": LJ, "pair": "example2_wedge", "max_degree": 4}, "verify")
    assert code == 0, json.loads(out)["violations"]

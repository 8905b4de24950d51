import json

import pytest

from bridgeland.cli import main


def run(capsys, *argv):
    code = main(["--out", "-", *argv])
    return code, json.loads(capsys.readouterr().out)


def test_stability_build_reports_exact_phases(capsys):
    code, rep = run(capsys, "stability", "build", "--corpus", "P2_pair_0", "--z", "-1", "1+i")
    assert code == 0 and rep["status"] == "ok"
    phases = [o["phase"]["exact"] for o in rep["result"]["objects"]]
    # E_0 = S_0[-1] sits one below the heart simple S_0 of phase 1
    assert phases == ["0", "1/4"]
    assert rep["config"]["z"] == ["-1", "1+i"]


def test_gl_lift_adds_two(capsys):
    gl = json.dumps({"T": [[1, 0], [0, 1]], "lift": 1})
    _, rep = run(capsys, "stability", "build", "--corpus", "P2_pair_0", "--z", "-1", "1+i", "--gl", gl)
    assert [o["phase"]["exact"] for o in rep["result"]["objects"]] == ["2", "9/4"]


def test_negative_arguments_are_not_flags(capsys):
    code, rep = run(capsys, "exceptional", "pn", "--n", "2", "--range", "-1..2")
    assert code == 0
    assert [f["i"] for f in rep["result"]["family"]] == [-1, 0, 1, 2]


def test_domain_errors_exit_one_with_a_report(capsys):
    code, rep = run(capsys, "hom", "--quiver", "pn:2", "--source", '{"bogus": 1}', "--target", '{"simple": "0"}')
    assert code == 1 and rep["status"] == "error"
    assert rep["error"]["type"] == "DerivedError"


def test_exhausted_search_exits_two(capsys):
    code, rep = run(capsys, "boundary-probe", "--corpus", "P2_pair_0", "--z", "1+i", "1+i", "--windings", "0", "0")
    assert code == 2 and rep["status"] == "indeterminate"
    assert rep["error"]["type"] == "SearchExhausted"


def test_reports_are_deterministic(tmp_path, capsys):
    out = tmp_path / "r.json"
    argv = ["--out", str(out), "probe-intersection", "--n", "2", "--samples", "30", "--seed", "3"]
    assert main(argv) == 0
    first = out.read_bytes()
    assert main(argv) == 0
    capsys.readouterr()
    assert out.read_bytes() == first


def test_default_report_path(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["chamber", "region", "--corpus", "A3_11_projectives"]) == 0
    assert capsys.readouterr().out.strip() == "chamber-region.json"
    rep = json.loads((tmp_path / "chamber-region.json").read_text())
    assert rep["schema_version"] and rep["command"] == "chamber-region"


def test_plot_slice_writes_csv_and_svg(tmp_path, capsys):
    csv, svg = tmp_path / "s.csv", tmp_path / "s.svg"
    code, rep = run(
        capsys, "plot-slice", "--corpus", "A3_11_projectives", "--fixed", "1=3/2",
        "--resolution", "4", "--csv", str(csv), "--svg", str(svg),
    )
    assert code == 0
    assert csv.read_text().count("\n") == 1 + 25
    assert svg.read_text().startswith("<svg")
    assert {tuple(p) for p in rep["result"]["polygon"]} == {("-2", "3/2"), ("1/2", "3/2"), ("1", "2"), ("-2", "2")}


def test_hn_of_a_heart_module(capsys):
    module = json.dumps({"dims": [1, 1], "maps": {"a0": [[0]], "a1": [[0]]}})
    code, rep = run(capsys, "hn", "--corpus", "P2_pair_0", "--z", "1+i", "-1", "--heart-module", module)
    assert code == 0
    assert len(rep["result"]["filtration"]["factors"]) == 2


@pytest.mark.parametrize("name", ["P2_pair_0", "A3_11_projectives"])
def test_chamber_contains_round_trip(capsys, name):
    _, region = run(capsys, "chamber", "region", "--corpus", name)
    n = len(region["result"]["collection"]["objects"])
    z = ["1+i"] * n
    windings = [str(w) for w in range(n)]
    code, rep = run(capsys, "chamber", "contains", "--corpus", name, "--z", *z, "--windings", *windings)
    assert code == 0
    if rep["result"]["inside"]:
        assert rep["result"]["theta_membership"] and rep["result"]["rho_roundtrip"]

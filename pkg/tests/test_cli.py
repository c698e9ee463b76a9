import json

import pytest

from cantorsum.cli import main
from cantorsum.formats import parse_sum_system
from cantorsum import ParseError

MIDDLE3 = """{
  "lambda_system": {"maps": [{"o": 1, "r": "1/3", "b": "0"}, {"o": 1, "r": "1/3", "b": "2/3"}]},
  "gamma_system": {"maps": [{"o": 1, "r": "1/3", "b": "0"}, {"o": 1, "r": "1/3", "b": "2/3"}]}
}
"""

SEPARATED = """{
  "lambda_system": {"maps": [{"o": 1, "r": "1/20", "b": "0"}, {"o": 1, "r": "1/20", "b": "19/20"}]},
  "gamma_system": {"maps": [{"o": 1, "r": "1/20", "b": "0"}, {"o": 1, "r": "1/20", "b": "19/20"}]},
  "eta": "1.37"
}
"""

BAD_RATIO = """{
  "lambda_system": {"maps": [
    {"o": 1, "r": "1/3", "b": "0"},
    {"o": 1, "r": "1.2", "b": "2/3"}
  ]},
  "gamma_system": {"maps": [{"o": 1, "r": "1/3", "b": "0"}]}
}
"""


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in (("m3", MIDDLE3), ("sep", SEPARATED), ("bad", BAD_RATIO)):
        p = tmp_path / f"{name}.json"
        p.write_text(text, encoding="utf-8")
        out[name] = str(p)
    return out


def test_certify_and_round_trip(files, tmp_path, capsys):
    report = tmp_path / "w.json"
    code = main(["certify-zero", files["m3"], "--eps", "0.5,0.1,0.02", "--scale-floor", "1e-6", "-o", str(report)])
    assert code == 0
    data = json.loads(report.read_text())
    assert [r["found"] for r in data["results"]] == [True, True, True]
    assert data["config"]["eps"] == ["1/2", "1/10", "1/50"]
    assert data["system"]["eta"] == "1"
    assert all(r["witness"]["verified_exact"] for r in data["results"])
    assert main(["verify-witness", str(report)]) == 0
    assert "verified 3/3" in capsys.readouterr().out


def test_tampered_witness_fails(files, tmp_path, capsys):
    report = tmp_path / "w.json"
    main(["certify-zero", files["m3"], "--eps", "0.1", "-o", str(report)])
    data = json.loads(report.read_text())
    data["results"][0]["witness"]["square2"]["u"] = [1, 1]
    report.write_text(json.dumps(data))
    assert main(["verify-witness", str(report)]) == 1


def test_not_found_exit_code(files, capsys):
    code = main(["certify-zero", files["sep"], "--eps", "0.02", "--scale-floor", str(20**-4)])
    assert code == 2
    data = json.loads(capsys.readouterr().out)
    assert data["results"][0]["not_found"]["depth_reached"] == 4


def test_budget_exit_code(files, capsys):
    code = main(["certify-zero", files["sep"], "--eps", "0.3", "--scale-floor", "1e-9", "--max-squares", "5"])
    assert code == 3


def test_classify(capsys):
    assert main(["classify-middle", "--lambda", "0.35", "--gamma", "0.35"]) == 0
    assert capsys.readouterr().out.strip() == "III"
    main(["classify-middle", "--lambda", "1/16", "--gamma", "1/16"])
    assert capsys.readouterr().out.strip() == "boundary"


def test_parse_error_names_map(files, capsys):
    assert main(["analyze", files["bad"]]) == 1
    err = capsys.readouterr().err
    assert "lambda_system.maps[1].r" in err and "line 4" in err


def test_parse_errors_direct():
    with pytest.raises(ParseError) as e:
        parse_sum_system('{"lambda_system": {"maps": [{"o": 2, "r": "1/3", "b": "0"}]}, "gamma_system": {"maps": []}}')
    assert e.value.field == "lambda_system.maps[0].o"
    with pytest.raises(ParseError) as e:
        parse_sum_system('{\n "lambda_system": \n}')
    assert e.value.line == 3
    with pytest.raises(ParseError):
        parse_sum_system('{"lambda_system": {"maps": [{"o": 1, "r": "x", "b": "0"}]}, "gamma_system": {"maps": []}}')
    with pytest.raises(ParseError):
        parse_sum_system(MIDDLE3.replace('"gamma_system"', '"gamma"'))


def test_unknown_flag_rejected(files):
    with pytest.raises(SystemExit) as e:
        main(["analyze", files["m3"], "--bogus"])
    assert e.value.code == 1


def test_analyze(files, capsys):
    assert main(["analyze", files["m3"]]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["lambda_system"]["hull"] == ["0", "1"]
    assert data["corner_family_applies"] is True


def test_csv_outputs_deterministic(files, tmp_path):
    outs = []
    for i in range(2):
        a, b, c = (tmp_path / f"{k}{i}.csv" for k in "abc")
        assert main(["scan-projections", files["m3"], "--eta-lo", "0.5", "--eta-hi", "1.5", "--grid-n", "5",
                     "--eps", "0.1", "--scale-floor", "1e-4", "--threads", str(1 + 3 * i), "-o", str(a)]) == 0
        assert main(["box-count", files["m3"], "--levels", "4", "-o", str(b)]) == 0
        assert main(["density", files["m3"], "--a", "0,1", "--r", "0.1,0.01", "-o", str(c)]) == 0
        outs.append([p.read_bytes() for p in (a, b, c)])
    assert outs[0] == outs[1]
    scan = outs[0][0].decode().splitlines()
    assert scan[0] == "index,eta,theta,eps,witness_found,depth_reached"
    assert scan[3].split(",")[4] == "true"
    assert (tmp_path / "a0.csv.meta.json").exists()
    dens = outs[0][2].decode().splitlines()
    assert dens[0] == "a,r,estimate" and len(dens) == 5


def test_region_map(tmp_path):
    csv_path, svg_path = tmp_path / "r.csv", tmp_path / "r.svg"
    assert main(["region-map", "--grid-n", "20", "--csv", str(csv_path), "--svg", str(svg_path)]) == 0
    rows = csv_path.read_text().splitlines()
    assert rows[0] == "lam,gam,label" and len(rows) == 401
    assert svg_path.read_text().count("<polyline") == 4
    assert main(["region-map"]) == 1

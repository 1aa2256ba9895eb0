import csv
import io
import json

import pytest

from pseudoheat import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_eval_airy_example(capsys):
    code, out, _ = run(capsys, "eval", "--m", "3", "--x", "0", "--t", "0.3333")
    assert code == 0
    assert out.splitlines()[0] == "x,t,value,abs_err,method,nodes"
    assert float(rows(out)[0]["value"]) == pytest.approx(0.35503, abs=5e-5)


def test_eval_gaussian_example(capsys):
    code, out, _ = run(capsys, "eval", "--m", "2", "--x", "1", "--t", "1")
    assert float(rows(out)[0]["value"]) == pytest.approx(0.21970, abs=5e-6)


def test_eval_cross_method(capsys):
    values = []
    for method in ("series", "damped"):
        _, out, _ = run(capsys, "eval", "--m", "4", "--x", "0", "--t", "1", "--method", method)
        values.append(float(rows(out)[0]["value"]))
    assert abs(values[0] - values[1]) < 1e-7


def test_eval_range_error_becomes_row_status(capsys):
    code, out, err = run(capsys, "eval", "--m", "5", "--x=-60,0", "--method", "series")
    assert code == 0
    r = rows(out)
    assert r[0]["method"] == "error" and r[0]["value"] == "nan"
    assert r[1]["method"] == "odd_series"
    assert "exceeds" in err
    code, out, _ = run(capsys, "eval", "--m", "5", "--x=-60", "--method", "series", "--format", "json")
    data = json.loads(out)
    assert data["rows"][0]["value"] is None
    assert data["rows"][0]["status"].startswith("error")


def test_eval_grid_and_output_file(capsys, tmp_path):
    path = tmp_path / "u.csv"
    code, out, _ = run(capsys, "eval", "--m", "5", "--x-range=-2:2:5", "--t", "0.5,1", "--out", str(path))
    assert code == 0 and out == ""
    r = rows(path.read_text())
    assert len(r) == 10
    assert {float(x["t"]) for x in r} == {0.5, 1.0}


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"m": 2, "x": [1.0], "t": [1.0], "format": "json"}))
    _, out, _ = run(capsys, "eval", "--config", str(cfg))
    assert json.loads(out)["m"] == 2
    _, out, _ = run(capsys, "eval", "--config", str(cfg), "--format", "csv", "--m", "3")
    assert out.startswith("x,t,value")
    assert rows(out)[0]["method"] == "airy_closed"


@pytest.mark.parametrize("content", ['{"bogus": 1}', '{"m": "3"}', "[1, 2]", "not json"])
def test_bad_config_files(capsys, tmp_path, content):
    cfg = tmp_path / "bad.json"
    cfg.write_text(content)
    code, _, err = run(capsys, "eval", "--config", str(cfg))
    assert code == 1
    assert "error" in err


@pytest.mark.parametrize("argv", [
    ["eval", "--m", "1"],
    ["eval", "--m", "3,5"],
    ["eval", "--t", "-1"],
    ["eval", "--method", "spline"],
    ["frobnicate"],
    ["verify", "--only", "nothing"],
    ["sample", "--mc", "0"],
    ["eval", "--config", "/nonexistent/config.json"],
    ["eval", "--out", "/nonexistent/dir/out.csv"],
])
def test_config_and_io_errors_exit_1(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_profile_report(capsys):
    code, out, _ = run(capsys, "profile", "--m", "3,5,7", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data["x"]) == 201 and set(data["u"]) == {"3", "5", "7"}
    rep = data["report"]
    # only the first Airy zero (x = -3.372) lies inside [-5, 5]
    assert rep["3"]["crossings_negative_x"] == 1
    assert rep["3"]["zero_crossings"][0] == pytest.approx(-2.338107 * 3 ** (1 / 3), abs=2e-3)
    assert rep["3"]["argmax_x"] < 0
    asym = [rep[m]["asymmetry"] for m in ("3", "5", "7")]
    assert asym == pytest.approx([1 / 6, 1 / 10, 1 / 14], abs=1e-6)


def test_profile_wider_grid_shows_two_crossings(capsys):
    _, out, _ = run(capsys, "profile", "--m", "3", "--x-range=-7:5:241")
    lines = [line for line in out.splitlines() if line.startswith("# m=3")]
    assert "crossings_negative_x=2" in lines[0]
    assert out.splitlines()[0] == "x,u_3"


def test_verify_mass_only(capsys):
    code, out, _ = run(capsys, "verify", "--only", "mass", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["passed"] is True
    assert [c["name"] for c in data["checks"]] == [
        "half_line_m3", "half_line_m5", "half_line_m7", "half_line_m2", "half_line_m4"]


def test_verify_mc_with_seed(capsys):
    code, out, _ = run(capsys, "verify", "--only", "mc", "--seed", "42", "--mc", "1e5")
    assert code == 0
    assert all(r["passed"] == "pass" for r in rows(out))


def test_verify_failure_exit_code(capsys, monkeypatch):
    from pseudoheat import checks

    failing = checks.Check("mass", "always_fails", lambda ctx: (1.0, 0.0, "forced"))
    monkeypatch.setattr(checks, "CHECKS", checks.CHECKS + [failing])
    code, out, _ = run(capsys, "verify", "--only", "always_fails", "--format", "json")
    assert code == 2
    assert json.loads(out)["passed"] is False


def test_verify_is_deterministic(capsys):
    outs = [run(capsys, "verify", "--only", "mc,stable", "--seed", "3", "--mc", "20000")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_sample_subordinator(capsys, tmp_path):
    path = tmp_path / "s.txt"
    code, out, _ = run(capsys, "sample", "--law", "subordinator", "--alpha", "0.5", "--mc", "1e5",
                       "--out", str(path), "--seed", "5")
    assert code == 0
    summary = json.loads(out)
    assert summary["ks_first_passage"] < 0.01
    for item in summary["laplace"]:
        assert abs(item["mean"] - item["exact"]) < 4 * item["se"]
    assert len(path.read_text().splitlines()) == 100_000


def test_sample_z1_median(capsys):
    _, out, _ = run(capsys, "sample", "--law", "zn", "--depth", "1", "--t", "2", "--mc", "1e5")
    summary = json.loads(out)
    assert summary["median"] == pytest.approx(-1.0, abs=0.03)
    for item in summary["cf"]:
        assert abs(complex(item["re"], item["im"]) - complex(item["exact_re"], item["exact_im"])) < 4 * item["se"]


def test_sample_gen_gamma_power_mean(capsys):
    _, out, _ = run(capsys, "sample", "--law", "gengamma", "--gamma", "3", "--t", "1.5", "--mc", "1e5")
    s = json.loads(out)["mean_x_pow_gamma"]
    assert abs(s["mean"] - 1.5) < 4 * s["se"]


def test_sample_invalid_law_is_config_error(capsys):
    assert run(capsys, "sample", "--law", "stable", "--alpha", "0.5", "--nu", "0.9")[0] == 1
    assert run(capsys, "sample", "--law", "subordinator", "--alpha", "1.5")[0] == 1


def test_sample_is_deterministic(capsys):
    a = run(capsys, "sample", "--law", "zn", "--depth", "2", "--mc", "5000", "--seed", "8")[1]
    b = run(capsys, "sample", "--law", "zn", "--depth", "2", "--mc", "5000", "--seed", "8")[1]
    assert a == b


def test_help_exits_cleanly(capsys):
    assert cli.main(["--help"]) == 0
    assert "verify" in capsys.readouterr().out

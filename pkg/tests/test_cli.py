import json
import math

import pytest

from qprod.cli import main

DELTA_SPEC = {"kind": "delta"}
E4_SPEC = {"kind": "eisenstein", "eisenstein_weight": 4}
LEVEL11_SPEC = {
    "kind": "eta_quotient",
    "level": 11,
    "weight": 2,
    "eta_exponents": {"1": 2, "11": 2},
}


@pytest.fixture
def spec_file(tmp_path):
    def write(spec, name="spec.json"):
        path = tmp_path / name
        path.write_text(json.dumps(spec))
        return path

    return write


def run(*argv):
    return main([str(a) for a in argv])


# -- expand ---------------------------------------------------------------


def test_expand_delta(tmp_path, spec_file):
    out = tmp_path / "delta.csv"
    assert run("expand", "--spec", spec_file(DELTA_SPEC), "--terms", 10, "--out", out) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,a_n"
    assert lines[1] == "1,1"
    assert lines[2] == "2,-24"
    assert lines[-1].startswith("10,")


def test_expand_to_stdout(spec_file, capsys):
    assert run("expand", "--spec", spec_file(E4_SPEC), "--terms", 3) == 0
    out = capsys.readouterr().out
    assert out.splitlines() == ["n,a_n", "0,1", "1,240", "2,2160", "3,6720"]


def test_expand_malformed_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert run("expand", "--spec", bad, "--terms", 5) == 2


def test_expand_invalid_spec(spec_file):
    path = spec_file({"kind": "eta_quotient", "level": 2, "eta_exponents": {"1": 1, "2": 1}})
    assert run("expand", "--spec", path, "--terms", 5) == 2


def test_expand_zero_terms(spec_file):
    assert run("expand", "--spec", spec_file(DELTA_SPEC), "--terms", 0) == 2


def test_expand_missing_file(tmp_path):
    assert run("expand", "--spec", tmp_path / "nope.json", "--terms", 5) == 2


# -- exponents ----------------------------------------------------------------


def test_exponents_delta(tmp_path, spec_file):
    out = tmp_path / "c.csv"
    assert run("exponents", "--spec", spec_file(DELTA_SPEC), "--terms", 30, "--out", out) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "m,c_m"
    assert len(lines) == 30  # rows 1..terms-1
    assert all(line.endswith(",24") for line in lines[1:])


def test_exponents_level11_pattern(tmp_path, spec_file):
    out = tmp_path / "c.csv"
    assert run("exponents", "--spec", spec_file(LEVEL11_SPEC), "--terms", 24, "--out", out) == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    for m_text, c_text in rows:
        assert int(c_text) == (4 if int(m_text) % 11 == 0 else 2)


def test_exponents_from_coefficient_file(tmp_path, spec_file):
    coeffs = tmp_path / "e4.csv"
    assert run("expand", "--spec", spec_file(E4_SPEC), "--terms", 20, "--out", coeffs) == 0
    out = tmp_path / "c.csv"
    assert run("exponents", "--coeffs", coeffs, "--terms", 20, "--out", out) == 0
    assert out.read_text().splitlines()[1] == "1,-240"


def test_exponents_requires_exactly_one_source(spec_file, capsys):
    spec = spec_file(DELTA_SPEC)
    with pytest.raises(SystemExit) as err:
        run("exponents", "--spec", spec, "--coeffs", spec, "--terms", 10)
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        run("exponents", "--terms", 10)
    assert err.value.code == 2


def test_expand_ingest_round_trip(tmp_path, spec_file):
    from qprod.forms import ETA_NEWFORM_EXPONENTS, newform_spec

    cases = [("delta", DELTA_SPEC), ("e4", E4_SPEC)]
    cases += [
        (f"newform{level}", newform_spec(level).to_dict())
        for level in sorted(ETA_NEWFORM_EXPONENTS)
    ]
    for name, spec in cases:
        coeffs = tmp_path / f"{name}.csv"
        assert run("expand", "--spec", spec_file(spec), "--terms", 25, "--out", coeffs) == 0
        via_spec = tmp_path / f"{name}_spec_c.csv"
        via_file = tmp_path / f"{name}_file_c.csv"
        assert run("exponents", "--spec", spec_file(spec), "--terms", 24, "--out", via_spec) == 0
        assert run("exponents", "--coeffs", coeffs, "--terms", 24, "--out", via_file) == 0
        assert via_spec.read_bytes() == via_file.read_bytes()


# -- fit / check -----------------------------------------------------------------


def test_fit_e4_from_spec(tmp_path, spec_file):
    out = tmp_path / "fit.json"
    assert run(
        "fit", "--spec", spec_file(E4_SPEC), "--terms", 61, "--window", "20:60", "--out", out
    ) == 0
    payload = json.loads(out.read_text())
    assert abs(payload["y_hat"] - math.sqrt(3) / 2) / (math.sqrt(3) / 2) < 0.05
    assert payload["points_used"] == 41
    assert payload["source"] == "E4"


def test_fit_from_exponent_csv(tmp_path, spec_file):
    exps = tmp_path / "c.csv"
    assert run("exponents", "--spec", spec_file(E4_SPEC), "--terms", 61, "--out", exps) == 0
    out = tmp_path / "fit.json"
    assert run("fit", "--coeffs", exps, "--window", "20:60", "--out", out) == 0
    payload = json.loads(out.read_text())
    assert abs(payload["y_hat"] - math.sqrt(3) / 2) < 0.05


def test_fit_deterministic_output(tmp_path, spec_file):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run(
            "fit", "--spec", spec_file(E4_SPEC), "--terms", 41, "--window", "10:40", "--out", out
        ) == 0
    assert a.read_bytes() == b.read_bytes()


def test_fit_window_exceeding_terms(spec_file):
    assert run("fit", "--spec", spec_file(E4_SPEC), "--terms", 30, "--window", "20:60") == 2


def test_fit_bad_window(spec_file):
    assert run("fit", "--spec", spec_file(E4_SPEC), "--terms", 61, "--window", "60") == 2
    assert run("fit", "--spec", spec_file(E4_SPEC), "--terms", 61, "--window", "9:3") == 2


def test_check_kohnen_delta(tmp_path, spec_file):
    out = tmp_path / "report.json"
    code = run(
        "check", "kohnen",
        "--spec", spec_file(DELTA_SPEC), "--terms", 201, "--window", "16:200",
        "--out", out,
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["verdict"] == "pass"
    assert payload["max_ratio"] < 10


def test_check_upper_with_wrong_height_fails(tmp_path, spec_file):
    out = tmp_path / "report.json"
    code = run(
        "check", "upper",
        "--spec", spec_file(E4_SPEC), "--terms", 61, "--window", "20:60",
        "--y-r", 0.5, "--out", out,
    )
    assert code == 1  # machine-readable failing verdict
    assert json.loads(out.read_text())["verdict"] == "fail"


def test_check_upper_passes_with_fitted_height(tmp_path, spec_file):
    fit_out = tmp_path / "fit.json"
    run("fit", "--spec", spec_file(E4_SPEC), "--terms", 61, "--window", "20:60", "--out", fit_out)
    y = json.loads(fit_out.read_text())["y_hat"]
    assert run(
        "check", "upper",
        "--spec", spec_file(E4_SPEC), "--terms", 61, "--window", "20:60", "--y-r", y,
    ) == 0


def test_check_requires_y_r(spec_file):
    assert run("check", "upper", "--spec", spec_file(E4_SPEC), "--terms", 61,
               "--window", "20:60") == 2


# -- level / kloosterman / vanishing ------------------------------------------------


def test_level_genus(capsys):
    assert run("level", 11) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {"level": 11, "index": 12, "nu2": 0, "nu3": 0, "nu_inf": 2, "genus": 1}


def test_kloosterman_rows(tmp_path):
    out = tmp_path / "k.csv"
    assert run("kloosterman", "--a", -1, "--b", 1, "--c-max", 10, "--level", 2, "--out", out) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "c,K"
    assert len(lines) == 6  # c = 2, 4, 6, 8, 10
    from qprod.arith import kloosterman, tau

    for line in lines[1:]:
        c_text, k_text = line.split(",")
        c, k = int(c_text), float(k_text)
        assert abs(k) <= tau(c) * math.sqrt(c) + 1e-9
        assert k == pytest.approx(float(kloosterman(-1, 1, c).exact_real), rel=1e-12)


def test_vanishing_level11(capsys):
    assert run("vanishing", 11, "--bound", 25) == 0
    payload = json.loads(capsys.readouterr().out)
    assert 19 in payload["indices"]


def test_vanishing_level11_bound100(capsys):
    assert run("vanishing", 11, "--bound", 100) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["indices"] == [19, 29, 57, 87, 95]


def test_vanishing_unknown_level():
    assert run("vanishing", 12, "--bound", 50) == 2


def test_vanishing_with_explicit_spec(tmp_path, spec_file, capsys):
    path = spec_file(LEVEL11_SPEC)
    assert run("vanishing", 11, "--bound", 30, "--spec", path, "--terms", 30) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["indices"] == [19, 29]


def test_jobs_flag_accepted(spec_file, capsys):
    assert run("expand", "--spec", spec_file(DELTA_SPEC), "--terms", 3, "--jobs", 2) == 0
    capsys.readouterr()
    assert run("expand", "--spec", spec_file(DELTA_SPEC), "--terms", 3, "--jobs", 0) == 2


def test_json_formats(spec_file, capsys):
    assert run("expand", "--spec", spec_file(E4_SPEC), "--terms", 2, "--format", "json") == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["rows"] == [[0, "1"], [1, "240"], [2, "2160"]]

    assert run("exponents", "--spec", spec_file(DELTA_SPEC), "--terms", 4, "--format", "json") == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["h"] == 1
    assert payload["rows"] == [[1, "24"], [2, "24"], [3, "24"]]

    assert run("kloosterman", "--a", 1, "--b", 1, "--c-max", 3, "--format", "json") == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["rows"][2][1] == pytest.approx(-1.0)

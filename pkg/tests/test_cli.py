import csv
import json
import subprocess
import sys

import pytest

from rieszsphere import cli, config
from rieszsphere.cli import OutputRecord, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def record(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


# -- potential ---------------------------------------------------------------

def test_potential_harmonic(capsys):
    rec = record(capsys, "potential", "--d", "3", "--s", "2", "--r", "2")
    assert rec["command"] == "potential" and rec["schema_version"] == "1.0"
    assert rec["results"]["table"][0]["value"] == pytest.approx(0.25, rel=1e-14)


def test_potential_centre_by_quadrature(capsys):
    rec = record(capsys, "potential", "--d", "2", "--s", "1.5", "--r", "0", "--method", "quadrature")
    assert rec["results"]["table"][0]["value"] == pytest.approx(1.0, rel=1e-12)


def test_potential_special(capsys):
    rec = record(capsys, "potential", "--d", "7", "--s", "2", "--r", "2", "--method", "special")
    assert rec["results"]["table"][0]["value"] == pytest.approx(0.2203125, rel=1e-14)


def test_potential_several_radii_and_log(capsys):
    rec = record(capsys, "potential", "--d", "2", "--s", "log", "--r", "0.5", "2")
    quad = record(capsys, "potential", "--d", "2", "--s", "log", "--r", "0.5", "2", "--method", "quadrature")
    vals = [row["value"] for row in rec["results"]["table"]]
    assert len(vals) == 2
    assert vals == pytest.approx([row["value"] for row in quad["results"]["table"]], rel=1e-10)


def test_potential_special_unavailable_is_domain_error(capsys):
    code, _, err = run(capsys, "potential", "--d", "5", "--s", "1.3", "--r", "2", "--method", "special")
    assert code == 3 and "special" in err


def test_potential_domain_error(capsys):
    code, out, err = run(capsys, "potential", "--d", "3", "--s", "3.5", "--r", "2")
    assert code == 3 and out == "" and "s" in err


@pytest.mark.parametrize("argv", [
    ["potential", "--d", "3", "--s", "abc", "--r", "2"],
    ["potential", "--d", "3", "--r", "2"],
    ["critical", "--d", "2", "--s", "1", "--q", "1", "--side", "north"],
    ["nonsense"],
    ["poly", "--kind", "A", "--d", "2", "--q", "x/y"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


# -- critical ----------------------------------------------------------------

def test_critical_golden(capsys):
    code, out, err = run(capsys, "critical", "--d", "2", "--s", "1", "--q", "1", "--side", "exterior")
    assert code == 0
    rec = json.loads(out)
    assert rec["results"]["distance_to_sphere"][0] == pytest.approx(1.6180339887, abs=1e-10)
    assert "1.6180339887" in err


def test_critical_log_weak_negative(capsys):
    rec = record(capsys, "critical", "--d", "2", "--s", "log", "--q", "-1", "--side", "exterior")
    assert rec["results"]["kind"] == "NoCritical"


def test_critical_two_radii(capsys):
    rec = record(capsys, "critical", "--d", "4", "--s", "1", "--q", "-0.99", "--side", "interior")
    res = rec["results"]
    assert res["kind"] == "Two"
    r1, r2 = res["radii"]
    assert r1 < 0.507122392 < r2


# -- poly --------------------------------------------------------------------

def test_poly_fourth_kind_linear(capsys):
    rec = record(capsys, "poly", "--kind", "D", "--d", "9", "--q", "-1")
    coeffs = [json_fraction(c) for c in rec["results"]["coefficients"]]
    assert [c / coeffs[-1] for c in coeffs] == [-1, 1]


def json_fraction(text):
    from fractions import Fraction
    return Fraction(text)


def test_poly_golden_roots(capsys):
    rec = record(capsys, "poly", "--kind", "A", "--d", "2", "--q", "1")
    got = sorted(re for re, im in rec["results"]["roots"])
    assert got == pytest.approx([-1, (3 - 5 ** 0.5) / 2, (3 + 5 ** 0.5) / 2], abs=1e-12)
    assert rec["results"]["converged"] is True


def test_poly_svg_export(capsys, tmp_path):
    stem = str(tmp_path / "zeros")
    rec = record(capsys, "poly", "--kind", "B", "--d", "12", "--q", "1", "--export", "svg", "--out", stem)
    path = rec["results"]["files"][0]
    text = open(path, encoding="utf-8").read()
    assert text.count('class="root"') == 12
    assert text.count('class="reference"') == 3
    assert 'width="800"' in text and "stroke-dasharray" in text


def test_poly_csv_export(capsys, tmp_path):
    stem = str(tmp_path / "zeros")
    rec = record(capsys, "poly", "--kind", "C", "--d", "3", "--q", "-1", "--export", "csv", "--out", stem)
    with open(rec["results"]["files"][0], newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["re", "im", "residual"]
    assert len(rows) == 1 + 5
    assert all(float(r[2]) < 1e-10 for r in rows[1:])


def test_poly_rational_charge(capsys):
    rec = record(capsys, "poly", "--kind", "B", "--d", "3", "--q", "1/10")
    assert rec["inputs"]["q"] == "1/10"
    assert rec["results"]["degree"] == 3


def test_poly_wrong_sign_is_domain_error(capsys):
    code, _, _ = run(capsys, "poly", "--kind", "A", "--d", "3", "--q", "-1")
    assert code == 3


# -- cap ---------------------------------------------------------------------

def test_cap_golden_solve(capsys):
    rec = record(capsys, "cap", "--d", "2", "--s", "1", "--R", "2.6180339887", "--q", "-5", "--solve")
    res = rec["results"]
    assert -1 < res["state"]["t"] < 1
    assert res["density_min"] >= -1e-9
    assert res["nonnegative"] is True
    assert len(res["density"]) == 41
    phi = res["state"]["phi"]
    outside = [w["value"] for w in res["weighted_potential"] if w["xi"] > res["state"]["t"]]
    assert min(outside) >= phi - 1e-12


def test_cap_exceptional_solve(capsys):
    rec = record(capsys, "cap", "--d", "3", "--s", "1", "--R", "2", "--q", "-5", "--solve")
    assert rec["results"]["exceptional"] is True
    assert rec["results"]["boundary_charge"] == pytest.approx(0.0, abs=1e-8)


def test_cap_weak_field_full_sphere(capsys):
    rec = record(capsys, "cap", "--d", "2", "--s", "1", "--R", "3", "--q", "-0.5", "--solve")
    assert rec["results"]["state"]["t"] == 1.0
    assert rec["results"]["support"] == "sphere"


def test_cap_fixed_t_positivity_verdict(capsys):
    base = ["cap", "--d", "2", "--s", "1", "--R", "2.6180339887", "--q", "-5"]
    tc = record(capsys, *base, "--solve")["results"]["state"]["t"]
    below = record(capsys, *base, "--t", str(tc - 0.05))["results"]
    above = record(capsys, *base, "--t", str(tc + 0.05))["results"]
    assert below["nonnegative"] is True
    assert above["nonnegative"] is False


def test_cap_needs_t_or_solve(capsys):
    code, _, _ = run(capsys, "cap", "--d", "2", "--s", "1", "--R", "2", "--q", "-5")
    assert code == 2


def test_cap_bad_config_is_domain_error(capsys):
    code, _, _ = run(capsys, "cap", "--d", "2", "--s", "1", "--R", "2", "--q", "5", "--solve")
    assert code == 3


# -- records, determinism and config -----------------------------------------

def test_output_record_round_trip():
    rec = OutputRecord("potential", {"d": 3, "s": 2.0}, {"table": [{"R": 2.0, "value": 0.25}]}, ["note"])
    back = OutputRecord.from_json(rec.to_json())
    assert back.to_dict() == rec.to_dict()
    assert back.to_json() == rec.to_json()


@pytest.mark.parametrize("argv", [
    ["critical", "--d", "3", "--s", "1.5", "--q", "2", "--side", "exterior"],
    ["poly", "--kind", "C", "--d", "6", "--q=-3/2"],
    ["cap", "--d", "2", "--s", "1", "--R", "2.6180339887", "--q", "-5", "--t", "-0.2"],
])
def test_byte_identical_output(capsys, argv):
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b and a
    assert json.loads(a) == OutputRecord.from_json(a).to_dict()


def test_output_file(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, out, _ = run(capsys, "-o", str(path), "potential", "--d", "3", "--s", "2", "--r", "2")
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["command"] == "potential"


def test_verify_quick(capsys, tmp_path):
    path = tmp_path / "verify.json"
    code, out, _ = run(capsys, "verify", "--level", "quick", "--json", str(path))
    assert code == 0
    assert "13/13 criteria passed" in out
    data = json.loads(path.read_text())
    assert len(data["criteria"]) == 13 and all(c["passed"] for c in data["criteria"])


def test_verify_failure_injection(capsys, tmp_path):
    cfg = tmp_path / "strict.json"
    cfg.write_text(json.dumps({"acceptance_tolerance": 1e-20}))
    code, out, _ = run(capsys, "--config", str(cfg), "verify", "--level", "quick")
    assert code == 1
    assert "failed" in out.splitlines()[-1]
    # the override does not leak into later runs
    assert config.get() == config.DEFAULT


def test_config_from_environment(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "strict.json"
    cfg.write_text(json.dumps({"acceptance_tolerance": 1e-20}))
    monkeypatch.setenv(config.CONFIG_ENV_VAR, str(cfg))
    code, _, _ = run(capsys, "verify", "--level", "quick")
    assert code == 1


def test_bad_config_file(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{not json")
    code, _, err = run(capsys, "--config", str(cfg), "potential", "--d", "3", "--s", "2", "--r", "2")
    assert code == 2 and "config" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rieszsphere", "potential", "--d", "3", "--s", "2", "--r", "2"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["table"][0]["value"] == pytest.approx(0.25)


def test_exit_code_constants():
    assert (cli.EXIT_OK, cli.EXIT_VERIFY, cli.EXIT_USAGE, cli.EXIT_DOMAIN) == (0, 1, 2, 3)

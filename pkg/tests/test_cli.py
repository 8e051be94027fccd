"""Command-line interface: JSON/CSV contracts, exit codes, determinism."""

import json

import pytest

import attainkit.cli as cli
from attainkit import CheckReport, NearCriticalWarning
from attainkit.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


CLASSIFY_ARGS = ("classify", "--N", "5", "--p", "2", "--q", "critical",
                 "--gamma", "2.2", "--alpha", "180")


def test_classify_json_contract(capsys):
    code, out, _ = run_cli(capsys, *CLASSIFY_ARGS)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "attain-kit/1"
    assert doc["command"] == "classify"
    assert doc["problem"]["regime"] == "critical-local"
    assert doc["verdict"]["attained"] is True
    assert doc["verdict"]["reason"] == "UniqueInteriorMax"
    assert doc["verdict"]["D"] > 1.0
    assert out.endswith("\n")


def test_classify_output_is_byte_identical(capsys):
    _, first, _ = run_cli(capsys, *CLASSIFY_ARGS)
    _, second, _ = run_cli(capsys, *CLASSIFY_ARGS)
    assert first == second


def test_classify_below_threshold(capsys):
    code, out, _ = run_cli(capsys, "classify", "--N", "5", "--p", "2",
                           "--q", "critical", "--gamma", "2.2", "--alpha", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"]["attained"] is False
    assert doc["verdict"]["reason"] == "BelowThreshold"


def test_constants_sobolev_json(capsys):
    code, out, _ = run_cli(capsys, "constants", "--N", "5", "--p", "2",
                           "--q", "critical")
    assert code == 0
    doc = json.loads(out)
    assert doc["sobolev"]["method"] == "quadrature"
    assert doc["sobolev"]["value"] == pytest.approx(0.25983308068493427, rel=1e-12)
    assert doc["sobolev"]["err_bound"] < 1e-12


def test_constants_interpolation_small_budget(capsys):
    code, out, _ = run_cli(capsys, "constants", "--N", "2", "--p", "2", "--q", "4",
                           "--budget", "400", "--grid", "100")
    assert code == 0
    doc = json.loads(out)
    assert doc["interpolation"]["method"] == "ascent-estimate"
    assert doc["interpolation"]["value"] == pytest.approx(
        0.17087244247019009, rel=1e-9)
    # bulky arrays are filtered out of the echoed metadata
    assert "ascent_log" not in doc["interpolation"]["meta"]
    assert "profile" not in doc["interpolation"]["meta"]


def test_constants_fractional_passthrough(capsys):
    code, out, _ = run_cli(capsys, "constants", "--N", "5", "--s", "0.6",
                           "--q", "critical", "--frac-constant", "1.7")
    assert code == 0
    doc = json.loads(out)
    assert doc["fractional"]["method"] == "user-input"
    assert doc["fractional"]["value"] == 1.7


def test_curve_csv_shape(capsys):
    code, out, _ = run_cli(capsys, "curve", "--N", "5", "--p", "2", "--q", "critical",
                           "--gamma", "2.2", "--alpha", "180", "--csv",
                           "--grid", "64")
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "t,s,f,g,h_factor,m_factor"
    assert len(lines) == 1 + 64 + 1  # header + rows + trailing newline
    assert "\r" not in out


def test_sweep_csv_contract(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--N", "5", "--p", "2", "--q", "critical",
                           "--alpha", "100", "--gamma-range", "2.0:3.5:0.5", "--csv")
    assert code == 0
    lines = [ln for ln in out.split("\n") if ln]
    assert lines[0] == "gamma,threshold,D,attained"
    assert len(lines) == 1 + 4  # 2.0, 2.5, 3.0, 3.5
    first = lines[1].split(",")
    assert first[0] == "2"
    assert float(first[1]) == pytest.approx(89.33435887039487, rel=1e-12)
    assert first[3] in ("true", "false")
    assert "\r" not in out


def test_sweep_threshold_nonincreasing(capsys):
    _, out, _ = run_cli(capsys, "sweep", "--N", "5", "--p", "2", "--q", "critical",
                        "--alpha", "100", "--gamma-range", "1.0:3.4:0.2", "--csv")
    thresholds = [float(ln.split(",")[1]) for ln in out.strip().split("\n")[1:]]
    assert all(a >= b for a, b in zip(thresholds, thresholds[1:]))


def test_maximizer_attained_json(capsys):
    code, out, _ = run_cli(capsys, "maximizer", "--N", "5", "--p", "2",
                           "--q", "critical", "--gamma", "2.2", "--alpha", "180")
    assert code == 0
    doc = json.loads(out)
    assert doc["lambda"] > 0
    assert doc["J_check"] == pytest.approx(doc["D"], rel=1e-6)
    assert len(doc["profile"]["r"]) == len(doc["profile"]["u"]) > 0


def test_maximizer_not_attained_yields_null(capsys):
    code, out, _ = run_cli(capsys, "maximizer", "--N", "5", "--p", "2",
                           "--q", "critical", "--gamma", "2.2", "--alpha", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["maximizer"] is None
    assert doc["verdict"]["reason"] == "BelowThreshold"


def test_maximizer_rejects_subcritical(capsys):
    code, _, err = run_cli(capsys, "maximizer", "--N", "2", "--p", "2",
                           "--q", "4", "--gamma", "1.5", "--alpha", "50",
                           "--budget", "400", "--grid", "100")
    assert code == 1
    assert err


def test_maximizer_tight_tol_exits_numerical(capsys):
    code, _, err = run_cli(capsys, "maximizer", "--N", "5", "--p", "2",
                           "--q", "critical", "--gamma", "2.2", "--alpha", "180",
                           "--tol", "1e-18")
    assert code == 2
    assert err


def test_bad_gamma_exits_validation(capsys):
    code, _, err = run_cli(capsys, "classify", "--N", "5", "--p", "2",
                           "--q", "critical", "--gamma", "-1", "--alpha", "1")
    assert code == 1
    assert err


def test_alpha_beta_conflict_exits_validation(capsys):
    code, _, err = run_cli(capsys, "classify", "--N", "5", "--p", "2",
                           "--q", "critical", "--gamma", "2.2",
                           "--alpha", "1", "--beta", "2")
    assert code == 1
    assert err


def test_beta_synonym_accepted(capsys):
    code, out, _ = run_cli(capsys, "classify", "--N", "5", "--s", "0.6",
                           "--q", "critical", "--gamma", "1.0", "--beta", "1",
                           "--frac-constant", "1.7")
    assert code == 0
    doc = json.loads(out)
    assert doc["problem"]["regime"] == "critical-fractional"
    assert doc["verdict"]["reason"] == "ConvexityExclusion"


def test_fractional_without_constant_exits_validation(capsys):
    code, _, err = run_cli(capsys, "classify", "--N", "5", "--s", "0.6",
                           "--q", "critical", "--gamma", "1.0", "--alpha", "1")
    assert code == 1
    assert err


def test_unknown_flag_exits_validation(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--N", "5", "--p", "2", "--q", "critical",
              "--gamma", "2.2", "--alpha", "1", "--bogus"])
    assert exc.value.code == 1


def test_near_critical_numeric_q_warns_and_upgrades(capsys):
    q = 10.0 / 3.0  # equals the critical exponent to float precision
    with pytest.warns(NearCriticalWarning):
        code, out, _ = run_cli(capsys, "classify", "--N", "5", "--p", "2",
                               "--q", repr(q), "--gamma", "2.2", "--alpha", "180")
    assert code == 0
    doc = json.loads(out)
    # the echoed flag records what the user passed; the regime upgrades
    assert doc["problem"]["regime"] == "critical-local"
    assert doc["verdict"]["attained"] is True


def test_out_writes_file(capsys, tmp_path):
    target = tmp_path / "verdict.json"
    code, out, _ = run_cli(capsys, *CLASSIFY_ARGS, "--out", str(target))
    assert code == 0
    assert out == ""
    doc = json.loads(target.read_text())
    assert doc["schema"] == "attain-kit/1"


def test_verify_exit_code_on_failure(capsys, monkeypatch):
    failing = CheckReport.from_violations(
        name="stub", violations=[1.0], n_cases=1, details=["forced failure"])
    monkeypatch.setattr(cli, "run_all", lambda: (failing,))
    code, out, _ = run_cli(capsys, "verify")
    assert code == 3
    doc = json.loads(out)
    assert doc["reports"][0]["passed"] is False


def test_verify_exit_code_on_success(capsys, monkeypatch):
    passing = CheckReport.from_violations(
        name="stub", violations=[-1.0], n_cases=1, details=["forced pass"])
    monkeypatch.setattr(cli, "run_all", lambda: (passing,))
    code, out, _ = run_cli(capsys, "verify")
    assert code == 0
    assert json.loads(out)["reports"][0]["passed"] is True


def test_nan_inf_serialization():
    text = cli.to_json({"a": float("nan"), "b": float("inf"), "c": -float("inf")})
    doc = json.loads(text)
    assert doc == {"a": "nan", "b": "inf", "c": "-inf"}

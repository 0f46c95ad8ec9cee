"""Scenario runner: bundled scenarios, exit codes, reports on disk."""

import json

import pytest

from evosemi.cli import main

MINI_SCENARIO = """
[scenario]
name = "mini"
pipelines = ["classify-semiflow", "check-family"]

[growth_rate]
kind = "expression"
expr = "s + s*s*s"
derivative = "1 + 3*s*s"

[semiflow]
kind = "generated"

[family]
kind = "closed_form"
dim = 1
matrix = [["exp(mu(s) - mu(t))"]]

[pipeline.check_family]
window = [-3.0, 3.0]
triples = 50
"""


def _report(out_dir, name, pipeline):
    path = out_dir / f"{name}.{pipeline}.report"
    assert path.exists(), path
    lines = path.read_text().splitlines()
    return lines[0], json.loads("\n".join(lines[1:]))


def test_translation_toy_passes(tmp_path):
    assert main(["run", "translation.toy", "--out", str(tmp_path)]) == 0
    for pipeline in ("classify-semiflow", "recover-mu", "check-family",
                     "fit-growth-bound", "check-semigroup",
                     "check-similarity"):
        _, data = _report(tmp_path, "translation-toy", pipeline)
        assert data["passed"] is True
    assert (tmp_path / "translation-toy.classify-semiflow.omega.csv").exists()


def test_reports_are_deterministic_modulo_timestamp(tmp_path):
    first = tmp_path / "a"
    second = tmp_path / "b"
    first.mkdir()
    second.mkdir()
    assert main(["run", "translation.toy", "--out", str(first)]) == 0
    assert main(["run", "translation.toy", "--out", str(second)]) == 0
    for path in sorted(first.iterdir()):
        twin = second / path.name
        if path.suffix == ".report":
            assert path.read_text().splitlines()[1:] \
                == twin.read_text().splitlines()[1:], path.name
        else:
            assert path.read_bytes() == twin.read_bytes(), path.name


def test_polylog_dichotomy_certifies(tmp_path):
    assert main(["run", "polylog-dichotomy", "--out", str(tmp_path)]) == 0
    _, cert = _report(tmp_path, "polylog-dichotomy", "certify-dichotomy")
    assert cert["result"] == "certificate"
    assert abs(cert["N"] - 1.0) <= 1e-6
    assert abs(cert["nu"] - 1.0) <= 1e-6
    _, verify = _report(tmp_path, "polylog-dichotomy",
                        "verify-integral-equation")
    assert verify["passed"] is True
    assert verify["max_residual"] <= 1e-6


def test_mini_scenario_with_expression_rate(tmp_path):
    scenario = tmp_path / "mini.toml"
    scenario.write_text(MINI_SCENARIO)
    assert main(["run", str(scenario), "--out", str(tmp_path)]) == 0
    _, data = _report(tmp_path, "mini", "check-family")
    assert data["passed"] is True


def test_tolerance_override_can_fail_a_pipeline(tmp_path):
    rc = main(["run", "translation.toy", "--out", str(tmp_path),
               "--tol", "check-semigroup=1e-30"])
    assert rc == 1
    _, data = _report(tmp_path, "translation-toy", "check-semigroup")
    assert data["passed"] is False


def test_undeclared_function_reference(tmp_path, capsys):
    scenario = tmp_path / "bad.toml"
    scenario.write_text(MINI_SCENARIO.replace(
        'pipelines = ["classify-semiflow", "check-family"]',
        'pipelines = ["check-semigroup"]\n\n'
        '[pipeline.check_semigroup]\nu = "ghost"',
        1,
    ))
    assert main(["run", str(scenario), "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "config error:" in err
    assert "ghost" in err


def test_unknown_pipeline_is_a_config_error(tmp_path, capsys):
    scenario = tmp_path / "odd.toml"
    scenario.write_text(MINI_SCENARIO.replace("check-family", "warp-core"))
    assert main(["run", str(scenario), "--out", str(tmp_path)]) == 2
    assert "warp-core" in capsys.readouterr().err


def test_unknown_scenario_name(tmp_path, capsys):
    assert main(["run", "no-such-scenario", "--out", str(tmp_path)]) == 2
    assert "config error:" in capsys.readouterr().err


def test_tolerances_must_be_positive(tmp_path):
    with pytest.raises(SystemExit):
        main(["run", "translation.toy", "--tol"])
    rc = main(["run", "translation.toy", "--out", str(tmp_path),
               "--tol", "semigroup=-1"])
    assert rc == 2

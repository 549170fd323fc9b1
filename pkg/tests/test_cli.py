import json
import subprocess
import sys

import pytest

from roughsq.cli import ConfigError, RunConfig, list_experiments, load_config, main
from roughsq.verify.registry import experiment_ids


def test_list_in_registry_order(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    pos = [out.index(i + " ") for i in experiment_ids()]
    assert pos == sorted(pos)
    assert "claim:" in list_experiments()


def test_run_writes_artifacts(tmp_path):
    assert main(["run", "sym-identity", "--tier", "quick", "--out", str(tmp_path)]) == 0
    d = tmp_path / "sym-identity"
    for name in ("report.txt", "report.json", "metadata.json"):
        assert (d / name).exists()
    rep = json.loads((d / "report.json").read_text())
    assert rep["passed"] is True
    assert json.loads(rep["config"])["tier"] == "quick"
    meta = json.loads((d / "metadata.json").read_text())
    assert meta["backend"] in ("python", "cython")


def test_report_json_is_byte_identical(tmp_path):
    for sub in ("a", "b"):
        assert main(["run", "menger", "--tier", "quick", "--seed", "3",
                     "--out", str(tmp_path / sub)]) == 0
    a = (tmp_path / "a" / "menger" / "report.json").read_bytes()
    b = (tmp_path / "b" / "menger" / "report.json").read_bytes()
    assert a == b


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"tier": "quick", "seed": 11, "out": str(tmp_path / "o")}))
    assert main(["run", "sym-identity", "--config", str(cfg), "--seed", "12"]) == 0
    rep = json.loads((tmp_path / "o" / "sym-identity" / "report.json").read_text())
    conf = json.loads(rep["config"])
    assert conf["seed"] == 12 and conf["tier"] == "quick"


@pytest.mark.parametrize("content", ['{"bogus": 1}', "[1, 2]", "not json", '{"seed": "x"}'])
def test_config_errors_exit_2(tmp_path, content, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(content)
    assert main(["run", "menger", "--config", str(cfg)]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_unknown_experiment_and_tier():
    assert main(["run", "nope"]) == 2
    with pytest.raises(ConfigError):
        RunConfig("menger", tier="fast")
    with pytest.raises(ConfigError):
        load_config("/nonexistent/config.json")


def test_failed_experiment_exit_status(tmp_path, capsys):
    # sigma-tau-lemma exceeds its slack of 4 at (a, b) = (4, 4)
    status = main(["run", "sigma-tau-lemma", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert status == 1 and "FAILED: sigma-tau-lemma" in out


def test_invalid_parameter_becomes_failed_report(tmp_path):
    assert main(["run", "hardy-counterexample", "--alpha", "2.5", "--tier", "quick",
                 "--out", str(tmp_path)]) == 1
    rep = json.loads((tmp_path / "hardy-counterexample" / "report.json").read_text())
    assert rep["passed"] is False and "alpha" in rep["diagnosis"]


def test_console_entry_point_module():
    out = subprocess.run([sys.executable, "-m", "roughsq.cli", "list"], capture_output=True,
                         text=True, check=True)
    assert "sym-identity" in out.stdout


@pytest.mark.slow
def test_sobolev_ratio_quick_band(tmp_path):
    assert main(["run", "sobolev-ratio", "--alpha", "1", "--p", "2", "--tier", "quick",
                 "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "sobolev-ratio" / "report.json").read_text())
    assert rep["verdicts.0.threshold"] == 1.1 and rep["verdicts.0.passed"] is True

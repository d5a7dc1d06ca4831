"""End-to-end command-line behavior: exit codes, artifacts, determinism."""

import json
import os

import numpy as np
import pytest

from phhinf.cli import main


def run(argv):
    return main(argv)


def test_synthesize_modified_ok(tmp_path, capsys):
    code = run(
        ["synthesize", "--model", "dc", "--gamma", "2", "--variant", "modified",
         "--output-dir", str(tmp_path / "ctrl")]
    )
    assert code == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["closed_loop_norm"] < 2.0 and cert["bound_satisfied"]
    assert (tmp_path / "ctrl" / "manifest.json").exists()
    assert (tmp_path / "ctrl" / "ph" / "manifest.json").exists()


def test_synthesize_indefinite_v1_exit_2(capsys):
    code = run(
        ["synthesize", "--model", "msd", "--n", "10", "--gamma", "1.2",
         "--variant", "modified-with-P", "--P", "0.05Q"]
    )
    assert code == 2


def test_synthesize_gamma_below_one_exit_2(capsys):
    assert run(["synthesize", "--model", "dc", "--gamma", "0.5", "--variant", "modified"]) == 2


def test_verify_round_trip(tmp_path, capsys):
    assert run(
        ["synthesize", "--model", "dc", "--gamma", "2.5", "--variant",
         "modified-with-P", "--P", "Q", "--output-dir", str(tmp_path / "c")]
    ) == 0
    capsys.readouterr()
    assert run(["verify", str(tmp_path / "c")]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["certificate"] == "pass"


def test_model_export_and_verify(tmp_path, capsys):
    assert run(["model", "export", "--model", "msd", "--n", "10",
                "--output-dir", str(tmp_path / "m")]) == 0
    assert run(["verify", str(tmp_path / "m")]) == 0


def test_norm_command(capsys):
    assert run(["norm", "--model", "dc"]) == 0
    value = float(capsys.readouterr().out.strip())
    assert abs(value - 0.4385504) < 1e-4


def test_sweep_deterministic_and_ordered(tmp_path, capsys):
    args = ["sweep", "--model", "dc", "--gamma-points", "4",
            "--output-dir", str(tmp_path / "s1")]
    assert run(args) == 0
    args2 = ["sweep", "--model", "dc", "--gamma-points", "4", "--jobs", "2",
             "--output-dir", str(tmp_path / "s2")]
    assert run(args2) == 0
    b1 = (tmp_path / "s1" / "sweep.csv").read_bytes()
    b2 = (tmp_path / "s2" / "sweep.csv").read_bytes()
    assert b1 == b2
    lines = b1.decode().splitlines()
    assert lines[0] == "gamma,variant,closed_loop_norm,bound_satisfied,reason"
    assert len(lines) == 1 + 4 * 3


def test_sweep_nan_rows_for_failures(tmp_path):
    assert run(
        ["sweep", "--model", "msd", "--n", "10", "--gamma-points", "3",
         "--variants", "modified-with-P", "--P", "0.05Q",
         "--output-dir", str(tmp_path)]
    ) == 0
    rows = (tmp_path / "sweep.csv").read_text().splitlines()[1:]
    assert all(",nan," in r and r.split(",")[-1] for r in rows)


def test_reduce_emits_four_csvs_and_report(tmp_path, capsys):
    assert run(
        ["reduce", "--model", "msd", "--n", "10", "--orders", "2,4",
         "--output-dir", str(tmp_path)]
    ) == 0
    for name in ("canonical.csv", "xmin.csv", "xmax.csv", "classical.csv"):
        text = (tmp_path / name).read_text().splitlines()
        assert text[0] == "r,error" and len(text) == 3
    report = json.loads((tmp_path / "report.json").read_text())
    assert set(report["curves"]) == {"canonical", "xmin", "xmax", "classical"}


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("model = dc\ngamma = 0.5  # overridden by the flag\nvariant = modified\n")
    assert run(["synthesize", "--config", str(cfg), "--gamma", "2"]) == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["gamma"] == 2.0
    # without the override the config's gamma stands and is inadmissible
    assert run(["synthesize", "--config", str(cfg)]) == 2


def test_jobs_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("PHHINF_JOBS", "2")
    assert run(["sweep", "--model", "dc", "--gamma-points", "2",
                "--output-dir", str(tmp_path)]) == 0
    assert (tmp_path / "sweep.csv").exists()


def test_unknown_config_key_exit_2(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("model = dc\nbogus = 1\n")
    assert run(["synthesize", "--config", str(cfg)]) == 2

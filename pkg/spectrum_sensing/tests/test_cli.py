"""
# Tests for the command line interface
Exit codes, config validation before any output is written, and the files
each command produces.
"""

import pandas as pd

from spectrum_sensing.cli import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, cli_main


def test_version(capsys):
    assert cli_main(["--version"]) == EXIT_OK
    assert "0.1.0" in capsys.readouterr().out


def test_unknown_subcommand(capsys):
    assert cli_main(["bogus"]) == EXIT_CONFIG
    assert "usage" in capsys.readouterr().err


def test_malformed_override(tmp_path):
    out = tmp_path / "out"
    assert cli_main(["generate", "--set", "n_points", "--out", str(out)]) == EXIT_CONFIG
    assert not out.exists()


def test_unknown_config_key(tmp_path):
    out = tmp_path / "out"
    assert cli_main(["generate", "--set", "colour=blue", "--out", str(out)]) == EXIT_CONFIG
    assert not out.exists()


def test_generate(tmp_path):
    out = tmp_path / "gen"
    code = cli_main(["generate", "--set", "grid.n_points=512", "--seed", "5", "--out", str(out)])
    assert code == EXIT_OK
    for name in ("psd.txt", "ideal_psd.txt", "plan.txt", "resolved.cfg"):
        assert (out / name).is_file()
    assert "master_seed = 5" in (out / "resolved.cfg").read_text(encoding="utf-8")


def test_generate_is_reproducible(tmp_path):
    args = ["generate", "--set", "n_points=256", "--seed", "9"]
    assert cli_main([*args, "--out", str(tmp_path / "a")]) == EXIT_OK
    assert cli_main([*args, "--out", str(tmp_path / "b")]) == EXIT_OK
    assert (tmp_path / "a" / "psd.txt").read_bytes() == (tmp_path / "b" / "psd.txt").read_bytes()


def test_detect_energy(tmp_path):
    out = tmp_path / "energy"
    assert cli_main(["detect", "energy", "--out", str(out)]) == EXIT_OK
    frame = pd.read_csv(out / "decisions.csv")
    assert list(frame.columns) == ["channel", "statistic", "threshold", "decision"]
    assert frame["channel"].tolist() == [1, 2, 3, 4, 5]


def test_detect_energy_rejects_non_power_of_two_fft(tmp_path):
    assert cli_main(["detect", "energy", "--set", "n_fft=12", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_detect_edges_from_psd_file(tmp_path):
    assert cli_main(["generate", "--set", "n_points=1024", "--out", str(tmp_path / "g")]) == EXIT_OK
    out = tmp_path / "edges"
    code = cli_main(
        ["detect", "edges", "--psd", str(tmp_path / "g" / "psd.txt"), "--out", str(out)]
    )
    assert code == EXIT_OK
    assert (out / "response.txt").read_text(encoding="utf-8").startswith("#combiner=")
    assert list(pd.read_csv(out / "edges.csv").columns) == ["frequency_mhz", "score"]


def test_missing_psd_file_is_runtime_error(tmp_path):
    code = cli_main(
        ["detect", "edges", "--psd", str(tmp_path / "none.txt"), "--out", str(tmp_path)]
    )
    assert code == EXIT_RUNTIME


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[cs]\ncs_trials = 2\ncs_ratio = 0.5\n", encoding="utf-8")
    out = tmp_path / "cs"
    assert cli_main(["cs", "recover", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
    frame = pd.read_csv(out / "cs_diagnostics.csv")
    assert frame["M"].tolist() == [128, 128]


def test_experiment_false_edge_uses_scenario_defaults(tmp_path):
    out = tmp_path / "fe"
    assert cli_main(["experiment", "false-edge", "--out", str(out)]) == EXIT_OK
    resolved = (out / "resolved.cfg").read_text(encoding="utf-8")
    assert "scenario = false-edge" in resolved
    assert "impulse_positions = 1400.0" in resolved

"""Command-line entry point: modes, flags, output files, exit codes."""
import csv
import json

import pytest

from qdd import cli
from qdd import io as qio

FAST = "dt: 2.0e-3\nhorizon: 1.0\nquad_nodes: 400\ncutoff_multiplier: 32\n"


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_evolve_success(tmp_path):
    cfg = _write(tmp_path, "run.yaml", FAST)
    out = tmp_path / "out"
    code = cli.main(["evolve", "--config", cfg, "--out", str(out)])
    assert code == 0
    assert (out / "evolve.csv").exists()
    summary = json.loads((out / "evolve_summary.json").read_text())
    assert summary["peak_c_l1"] > 0
    with open(out / "evolve.csv") as fh:
        header = next(csv.reader(fh))
    assert tuple(header) == qio.EVOLVE_COLUMNS


def test_dump_greens_flag(tmp_path):
    cfg = _write(tmp_path, "run.yaml", FAST)
    out = tmp_path / "out"
    code = cli.main(["evolve", "--config", cfg, "--out", str(out), "--dump-greens"])
    assert code == 0
    assert (out / "greens.csv").exists()


def test_cli_overrides(tmp_path):
    out = tmp_path / "out"
    code = cli.main(
        ["evolve", "--out", str(out), "--dt", "2e-3", "--horizon", "0.5",
         "--quad-nodes", "400", "--backend", "volterra"]
    )
    assert code == 0
    with open(out / "evolve.csv") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 252  # header + 251 grid points


def test_closed_mode(tmp_path):
    cfg = _write(tmp_path, "run.yaml", "mode: closed\nhorizon: 10\n")
    out = tmp_path / "out"
    assert cli.main(["closed", "--config", cfg, "--out", str(out)]) == 0
    with open(out / "closed.csv") as fh:
        header = next(csv.reader(fh))
    assert tuple(header) == qio.CLOSED_COLUMNS


def test_sweep_mode(tmp_path):
    cfg = _write(
        tmp_path,
        "run.yaml",
        FAST
        + "mode: sweep\nsweep_param1: gamma_L\nsweep_values1: [2.0, 5.0]\n"
        + "sweep_param2: w_R\nsweep_values2: [1.0]\n",
    )
    out = tmp_path / "out"
    assert cli.main(["sweep", "--config", cfg, "--out", str(out)]) == 0
    rows = qio.read_sweep_csv(str(out / "sweep.csv"))
    assert len(rows) == 2


def test_validation_exit_code(tmp_path):
    cfg = _write(tmp_path, "bad.yaml", "w_L: -1\n")
    assert cli.main(["evolve", "--config", cfg, "--out", str(tmp_path / "o")]) == 1


def test_numerical_exit_code(tmp_path):
    # tiny oracle bath + long horizon trips the recurrence guard
    cfg = _write(
        tmp_path, "orc.yaml", "mode: oracle-check\nhorizon: 12\noracle_modes: 10\n"
    )
    assert cli.main(["oracle-check", "--config", cfg, "--out", str(tmp_path / "o")]) == 2


def test_io_exit_code(tmp_path):
    missing = str(tmp_path / "nope.yaml")
    assert cli.main(["evolve", "--config", missing, "--out", str(tmp_path / "o")]) == 3


def test_oracle_check_passes(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "orc.yaml",
        "mode: oracle-check\nhorizon: 2\nquad_nodes: 600\ncutoff_multiplier: 32\n"
        "oracle_modes: 300\noracle_stride: 20\n",
    )
    assert cli.main(["oracle-check", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 3

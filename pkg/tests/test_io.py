"""Config parsing and CSV/JSON serialization round trips."""
import numpy as np
import pytest

import qdd
from qdd import io as qio
from qdd.sweep import SweepResult, SweepSpec


def test_empty_config_gives_reference_defaults():
    cfg = qio.parse_config({})
    assert cfg.mode == "evolve"
    p = cfg.params
    assert (p.eps11, p.eps22, p.eps12) == (3.0, 2.0, 0.4)
    assert (p.left.gamma, p.left.width, p.left.mu) == (5.0, 2.0, 5.0)
    assert (p.right.gamma, p.right.width, p.right.mu) == (5.0, 2.0, -5.0)
    assert p.left.beta == qdd.ZERO_TEMPERATURE
    np.testing.assert_allclose(p.initial_occupation, np.diag([0.0, 1.0]))
    assert cfg.grid.dt == 1e-3
    assert cfg.grid.horizon == pytest.approx(12.0)
    assert cfg.spectral.cutoff_cap == np.inf
    capped = qio.parse_config({"cutoff_cap": 48.0})
    assert capped.spectral.cutoff_cap == 48.0


def test_validation_error_names_the_key():
    with pytest.raises(qdd.ConfigError, match="w_L"):
        qio.parse_config({"w_L": -1})
    with pytest.raises(qdd.ConfigError, match="beta_R"):
        qio.parse_config({"beta_R": -2})
    with pytest.raises(qdd.ConfigError):
        qio.parse_config({"no_such_key": 1})
    with pytest.raises(qdd.ConfigError):
        qio.parse_config({"mode": "explode"})
    with pytest.raises(qdd.ConfigError):
        qio.parse_config({"initial": "02"})


def test_sweep_mode_requires_sweep_block():
    with pytest.raises(qdd.ConfigError):
        qio.parse_config({"mode": "sweep"})
    cfg = qio.parse_config(
        {
            "mode": "sweep",
            "sweep_param1": "gamma_L",
            "sweep_values1": [1.0, 2.0],
            "sweep_param2": "w_R",
            "sweep_values2": [3.0],
        }
    )
    assert cfg.sweep is not None
    assert cfg.sweep.values1 == (1.0, 2.0)


def test_load_config_roundtrip(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("eps12: 0.7\nhorizon: 2.5\nbackend: volterra\n")
    cfg = qio.load_config(str(path))
    assert cfg.params.eps12 == 0.7
    assert cfg.grid.horizon == pytest.approx(2.5)
    assert cfg.backend == "volterra"


def test_evolve_columns_schema():
    assert qio.EVOLVE_COLUMNS == (
        "t", "rho11", "rho22", "rho33", "rho44", "re_rho23", "im_rho23",
        "c_l1", "c_re", "purity", "entropy", "mi", "n1", "n2",
        "i_left", "i_right",
    )


def test_evolve_csv_roundtrip(tmp_path, short_obs, short_dm):
    path = tmp_path / "evolve.csv"
    qio.write_evolve_csv(str(path), short_obs, short_dm.rho)
    data = qio.read_evolve_csv(str(path))
    assert list(data) == list(qio.EVOLVE_COLUMNS)
    np.testing.assert_array_equal(data["t"], short_obs.grid.times)
    np.testing.assert_array_equal(data["c_l1"], short_obs.c_l1)
    np.testing.assert_array_equal(data["i_left"], short_obs.current_left)
    # a second write is byte-identical
    path2 = tmp_path / "evolve2.csv"
    qio.write_evolve_csv(str(path2), short_obs, short_dm.rho)
    assert path.read_bytes() == path2.read_bytes()


def test_evolve_summary(tmp_path, short_obs):
    import json

    path = tmp_path / "summary.json"
    qio.write_evolve_summary(str(path), short_obs)
    summary = json.loads(path.read_text())
    assert summary["peak_c_l1"] == pytest.approx(short_obs.c_l1.max())
    assert summary["converged"] is False


def test_closed_csv_header_only_for_empty_series(tmp_path):
    path = tmp_path / "closed.csv"
    qio.write_closed_csv(str(path), np.array([]), np.array([]), np.zeros((0, 3)))
    lines = path.read_text().strip().splitlines()
    assert lines == [",".join(qio.CLOSED_COLUMNS)]


def test_sweep_csv_roundtrip(tmp_path):
    spec = SweepSpec(param1="gamma_L", values1=(1.0,), param2="w_R", values2=(2.0,))
    rows = (
        {
            "param1": 1.0,
            "param2": 2.0,
            "peak_c_l1": 0.25,
            "peak_time": 1.5,
            "steady_c_l1": 0.2,
            "steady_current_mag": 0.1,
            "steady_mi": 0.3,
            "steady_onset_time": float("nan"),
            "converged": False,
            "error": "",
        },
    )
    path = tmp_path / "sweep.csv"
    qio.write_sweep_csv(str(path), SweepResult(spec=spec, rows=rows))
    back = qio.read_sweep_csv(str(path))
    assert len(back) == 1
    assert back[0]["peak_c_l1"] == 0.25
    assert np.isnan(back[0]["steady_onset_time"])
    assert back[0]["converged"] is False

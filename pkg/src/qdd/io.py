"""Configuration loading and result serialization.

Run configs are flat YAML key-value documents; every key has a default so an
empty file reproduces the reference parameter point. Time series go to CSV
with a fixed column order and full double precision; a JSON sidecar carries
scalar summaries.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
import yaml

from .model import ZERO_TEMPERATURE, ModelParams, ReservoirParams, SpectralConfig
from .observables import ObservableSeries
from .propagator import TimeGrid
from .sweep import CELL_COLUMNS, SWEEPABLE, SweepResult, SweepSpec, extract_cell


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


MODES = ("evolve", "closed", "sweep", "oracle-check")

_FLOAT_KEYS = {
    "eps11": 3.0, "eps22": 2.0, "eps12": 0.4,
    "gamma_L": 5.0, "gamma_R": 5.0,
    "w_L": 2.0, "w_R": 2.0,
    "mu_L": 5.0, "mu_R": -5.0,
    "beta_L": ZERO_TEMPERATURE, "beta_R": ZERO_TEMPERATURE,
    "dt": 1e-3, "horizon": 12.0,
    "cutoff_multiplier": 64.0,
    "cutoff_cap": float("inf"),
    "oracle_cutoff": 10.0,
}
_INT_KEYS = {"quad_nodes": 1600, "oracle_modes": 400, "oracle_stride": 10}
_STR_KEYS = {"initial": "01", "backend": "aux-ode", "mode": "evolve",
             "sweep_param1": "", "sweep_param2": ""}
_LIST_KEYS = ("sweep_values1", "sweep_values2")
_KNOWN_KEYS = set(_FLOAT_KEYS) | set(_INT_KEYS) | set(_STR_KEYS) | set(_LIST_KEYS)

_INITIAL_STATES = {
    "00": (0.0, 0.0), "01": (0.0, 1.0), "10": (1.0, 0.0), "11": (1.0, 1.0),
}


def _initial_matrix(label: str) -> np.ndarray:
    return np.diag(np.asarray(_INITIAL_STATES[label], dtype=complex))


@dataclass(frozen=True)
class RunConfig:
    mode: str
    params: ModelParams
    grid: TimeGrid
    spectral: SpectralConfig
    backend: str = "aux-ode"
    sweep: SweepSpec | None = None
    oracle_modes: int = 400
    oracle_cutoff: float = 10.0
    oracle_stride: int = 10


def _coerce_float(key, value):
    if isinstance(value, str) and value.lower() in ("inf", "infinity"):
        return float("inf")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"key {key!r}: expected a number, got {value!r}") from None


def parse_config(doc: dict | None, overrides: dict | None = None) -> RunConfig:
    """Build a validated RunConfig from a flat mapping plus CLI overrides."""
    doc = dict(doc or {})
    unknown = set(doc) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = {**_FLOAT_KEYS, **_INT_KEYS, **_STR_KEYS, **doc, **(overrides or {})}

    vals = {k: _coerce_float(k, merged[k]) for k in _FLOAT_KEYS}
    ints = {}
    for k in _INT_KEYS:
        try:
            ints[k] = int(merged[k])
        except (TypeError, ValueError):
            raise ConfigError(f"{k} must be an integer, got {merged[k]!r}") from None
    initial = str(merged["initial"])
    if initial not in _INITIAL_STATES:
        raise ConfigError(f"initial must be one of {sorted(_INITIAL_STATES)}, got {initial!r}")
    backend = str(merged["backend"])
    mode = str(merged["mode"])
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")

    for k in ("gamma_L", "gamma_R", "w_L", "w_R", "dt", "horizon"):
        if vals[k] <= 0:
            raise ConfigError(f"key {k!r} must be positive, got {vals[k]}")
    for k in ("beta_L", "beta_R"):
        if not vals[k] > 0:
            raise ConfigError(f"key {k!r} must be positive or inf, got {vals[k]}")
    n_steps = int(round(vals["horizon"] / vals["dt"]))
    if n_steps < 2:
        raise ConfigError("horizon must cover at least two time steps")

    try:
        params = ModelParams(
            eps11=vals["eps11"], eps22=vals["eps22"], eps12=vals["eps12"],
            left=ReservoirParams(gamma=vals["gamma_L"], width=vals["w_L"],
                                 mu=vals["mu_L"], beta=vals["beta_L"]),
            right=ReservoirParams(gamma=vals["gamma_R"], width=vals["w_R"],
                                  mu=vals["mu_R"], beta=vals["beta_R"]),
            initial_occupation=_initial_matrix(initial),
        )
        grid = TimeGrid(dt=vals["dt"], n_steps=n_steps)
        spectral = SpectralConfig(nodes_per_reservoir=ints["quad_nodes"],
                                  cutoff_multiplier=vals["cutoff_multiplier"],
                                  cutoff_cap=vals["cutoff_cap"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    sweep = None
    if mode == "sweep":
        p1, p2 = str(merged.get("sweep_param1", "")), str(merged.get("sweep_param2", ""))
        v1, v2 = merged.get("sweep_values1"), merged.get("sweep_values2")
        if not (p1 and p2 and v1 and v2):
            raise ConfigError(
                "mode 'sweep' requires sweep_param1/sweep_param2 "
                "and sweep_values1/sweep_values2")
        if p1 not in SWEEPABLE or p2 not in SWEEPABLE:
            raise ConfigError(f"sweep parameters must be in {SWEEPABLE}")
        try:
            sweep = SweepSpec(
                param1=p1, values1=tuple(float(x) for x in v1),
                param2=p2, values2=tuple(float(x) for x in v2),
                base=params, grid=grid, spectral=spectral, backend=backend)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    return RunConfig(mode=mode, params=params, grid=grid, spectral=spectral,
                     backend=backend, sweep=sweep,
                     oracle_modes=ints["oracle_modes"],
                     oracle_cutoff=vals["oracle_cutoff"],
                     oracle_stride=max(ints["oracle_stride"], 1))


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    doc = None
    if path is not None:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
        if doc is None:
            doc = {}
        if not isinstance(doc, dict):
            raise ConfigError("config must be a flat key: value document")
    return parse_config(doc, overrides)


EVOLVE_COLUMNS = (
    "t", "rho11", "rho22", "rho33", "rho44", "re_rho23", "im_rho23",
    "c_l1", "c_re", "purity", "entropy", "mi", "n1", "n2", "i_left", "i_right",
)


def _fmt(x) -> str:
    return "%.17g" % float(x)


def evolve_table(obs: ObservableSeries, rho: np.ndarray) -> list:
    t = obs.grid.times
    cols = [
        t, rho[:, 0, 0].real, rho[:, 1, 1].real, rho[:, 2, 2].real,
        rho[:, 3, 3].real, rho[:, 1, 2].real, rho[:, 1, 2].imag,
        obs.c_l1, obs.c_rel_entropy, obs.purity, obs.von_neumann_entropy,
        obs.mutual_information, obs.n1, obs.n2,
        obs.current_left, obs.current_right,
    ]
    return [dict(zip(EVOLVE_COLUMNS, row)) for row in zip(*cols)]


def write_evolve_csv(path: str, obs: ObservableSeries, rho: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(EVOLVE_COLUMNS)
        for row in evolve_table(obs, rho):
            w.writerow([_fmt(row[c]) for c in EVOLVE_COLUMNS])


def write_evolve_summary(path: str, obs: ObservableSeries) -> None:
    cell = extract_cell(obs)
    with open(path, "w") as fh:
        json.dump(cell, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_evolve_csv(path: str) -> dict:
    """Round-trip reader; returns column name -> float array."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or tuple(rows[0].keys()) != EVOLVE_COLUMNS:
        raise ConfigError(f"unexpected columns in {path}")
    return {c: np.array([float(r[c]) for r in rows]) for c in EVOLVE_COLUMNS}


CLOSED_COLUMNS = ("t", "c_l1", "bloch_x", "bloch_y", "bloch_z")


def write_closed_csv(path: str, times, c_l1, bloch) -> None:
    """Closed-system trajectory table for downstream rendering."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CLOSED_COLUMNS)
        for k in range(len(times)):
            w.writerow([_fmt(x) for x in
                        (times[k], c_l1[k], bloch[k, 0], bloch[k, 1], bloch[k, 2])])


def write_greens_csv(path: str, grid: TimeGrid, u: np.ndarray,
                     v: np.ndarray, vbar: np.ndarray) -> None:
    """Raw propagator and noise-correlation entries, one row per grid point."""
    names = ["t"]
    for tag in ("u", "v", "vbar"):
        for i in (1, 2):
            for j in (1, 2):
                names += [f"re_{tag}{i}{j}", f"im_{tag}{i}{j}"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for k, t in enumerate(grid.times):
            row = [t]
            for arr in (u, v, vbar):
                for i in range(2):
                    for j in range(2):
                        row += [arr[k, i, j].real, arr[k, i, j].imag]
            w.writerow([_fmt(x) for x in row])


def write_sweep_csv(path: str, result: SweepResult) -> None:
    """Long-format table, one row per cell, plus a JSON metadata sidecar."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CELL_COLUMNS)
        for row in result.rows:
            out = []
            for c in CELL_COLUMNS:
                v = row[c]
                out.append(v if isinstance(v, str) else
                           (str(bool(v)).lower() if c == "converged" else _fmt(v)))
            w.writerow(out)
    meta = {
        "param1": result.spec.param1, "values1": list(result.spec.values1),
        "param2": result.spec.param2, "values2": list(result.spec.values2),
        "dt": result.spec.grid.dt, "horizon": result.spec.grid.horizon,
        "backend": result.spec.backend,
        "quad_nodes": result.spec.spectral.nodes_per_reservoir,
    }
    with open(_sidecar(path), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sidecar(csv_path: str) -> str:
    return (csv_path[:-4] if csv_path.endswith(".csv") else csv_path) + ".json"


def read_sweep_csv(path: str):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        d = dict(r)
        for c in CELL_COLUMNS:
            if c in ("error",):
                continue
            d[c] = (d[c] == "true") if c == "converged" else float(d[c])
        out.append(d)
    return out

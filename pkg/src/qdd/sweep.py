"""Two-parameter sweeps over reservoir couplings / spectral widths, with
steady-state detection and per-cell extraction of peak and steady scalars.

Cells are independent solves executed by a process pool (capped by the
QDD_NUM_THREADS environment variable); results are assembled in fixed cell
order so the output table is byte-identical regardless of worker count.
"""
from __future__ import annotations

import dataclasses
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .density import assemble_rho
from .model import ModelParams, ReservoirParams, SpectralConfig
from .noise import compute_noise_correlations
from .observables import ObservableSeries, compute_observables
from .propagator import TimeGrid, solve_retarded

SWEEPABLE = ("gamma_L", "gamma_R", "w_L", "w_R")

#: sliding-window width (in time units) and tolerance for steady-state detection
STEADY_WINDOW = 1.0
STEADY_TOL = 1e-4


def detect_steady_state(times: np.ndarray, series_list, window: float = STEADY_WINDOW,
                        tol: float = STEADY_TOL):
    """Earliest t where every monitored series varies < tol over [t, t+window].

    Returns None when no such onset exists within the covered horizon, or
    when the horizon is too short to certify one at all.
    """
    dt = times[1] - times[0]
    w_steps = max(int(round(window / dt)), 2)
    if len(times) < 2 * w_steps:
        return None
    n_windows = len(times) - w_steps  # windows [k, k + w_steps] inclusive
    ok = np.ones(n_windows, dtype=bool)
    for s in series_list:
        win = sliding_window_view(np.asarray(s, dtype=float), w_steps + 1)
        ok &= (win.max(axis=1) - win.min(axis=1)) < tol
    idx = np.nonzero(ok)[0]
    return float(times[idx[0]]) if len(idx) else None


@dataclass(frozen=True)
class SweepSpec:
    param1: str
    values1: tuple
    param2: str
    values2: tuple
    base: ModelParams = field(default_factory=ModelParams)
    grid: TimeGrid = field(default_factory=lambda: TimeGrid(dt=1e-3, n_steps=12000))
    spectral: SpectralConfig = field(default_factory=SpectralConfig)
    backend: str = "aux-ode"

    def __post_init__(self):
        for name in (self.param1, self.param2):
            if name not in SWEEPABLE:
                raise ValueError(f"sweep parameter must be one of {SWEEPABLE}, got {name!r}")
        if self.param1 == self.param2:
            raise ValueError("swept parameters must be distinct")
        for vals in (self.values1, self.values2):
            if not len(vals) or any(v <= 0 for v in vals):
                raise ValueError("sweep value lists must be nonempty and positive")
        object.__setattr__(self, "values1", tuple(float(v) for v in self.values1))
        object.__setattr__(self, "values2", tuple(float(v) for v in self.values2))


CELL_COLUMNS = (
    "param1", "param2", "peak_c_l1", "peak_time", "steady_c_l1",
    "steady_current_mag", "steady_mi", "steady_onset_time", "converged", "error",
)


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple  # one dict per cell, fixed row-major order


def apply_param(p: ModelParams, name: str, value: float) -> ModelParams:
    side = "left" if name.endswith("_L") else "right"
    attr = "gamma" if name.startswith("gamma") else "width"
    res = dataclasses.replace(getattr(p, side), **{attr: value})
    return dataclasses.replace(p, **{side: res})


def extract_cell(obs: ObservableSeries) -> dict:
    """Peak and steady-state scalars from one evolution."""
    times = obs.grid.times
    peak_idx = int(np.argmax(obs.c_l1))
    onset = detect_steady_state(
        times, [obs.c_l1, obs.n1, obs.n2, obs.current_left]
    )
    # steady values from the average over the last detection window; honest
    # last-window averages are still reported when unconverged
    w_steps = min(max(int(round(STEADY_WINDOW / obs.grid.dt)), 2), len(times) - 1)
    tail = slice(len(times) - w_steps, None)
    return {
        "peak_c_l1": float(obs.c_l1[peak_idx]),
        "peak_time": float(times[peak_idx]),
        "steady_c_l1": float(obs.c_l1[tail].mean()),
        "steady_current_mag": float(np.abs(obs.current_left[tail].mean())),
        "steady_mi": float(obs.mutual_information[tail].mean()),
        "steady_onset_time": onset if onset is not None else float("nan"),
        "converged": onset is not None,
        "error": "",
    }


def evolve_observables(p: ModelParams, grid: TimeGrid, spectral: SpectralConfig,
                       backend: str = "aux-ode") -> ObservableSeries:
    """Full pipeline: propagator -> noise -> density matrix -> observables."""
    pg = solve_retarded(p, grid, backend=backend)
    nc = compute_noise_correlations(pg, spectral, p)
    dm = assemble_rho(pg, nc, p)
    return compute_observables(dm, p)


def _run_cell(args) -> dict:
    spec, v1, v2 = args
    row = {"param1": v1, "param2": v2}
    try:
        p = apply_param(apply_param(spec.base, spec.param1, v1), spec.param2, v2)
        obs = evolve_observables(p, spec.grid, spec.spectral, spec.backend)
        row.update(extract_cell(obs))
    except Exception as exc:  # per-cell failures never abort the sweep
        row.update({k: float("nan") for k in CELL_COLUMNS[2:8]})
        row["converged"] = False
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def worker_count() -> int:
    cap = os.environ.get("QDD_NUM_THREADS")
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(int(cap), 1))
    return n


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Run every cell; deterministic row order (values1 outer, values2 inner)."""
    tasks = [(spec, v1, v2) for v1 in spec.values1 for v2 in spec.values2]
    n_workers = worker_count()
    if n_workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            rows = list(pool.map(_run_cell, tasks, chunksize=1))
    else:
        rows = [_run_cell(t) for t in tasks]
    return SweepResult(spec=spec, rows=tuple(rows))

"""Brute-force verifier: each continuum reservoir is replaced by N discrete
modes and the resulting quadratic Hamiltonian is diagonalized exactly at the
single-particle level. All correlation functions follow from the exact
unitary and the initial Gaussian covariance, giving reference values for u,
v, vbar, the quartic noise average, and every density-matrix entry.

Not a production solver: the cubic cost in N restricts it to spot checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import DensityMatrixSeries
from .model import ModelParams, SERIAL_DOT_INDEX, lorentzian, fermi_occupation
from .propagator import TimeGrid


class RecurrenceError(RuntimeError):
    """Requested horizon exceeds the finite bath's recurrence-safe window."""


@dataclass(frozen=True)
class DiscretizedBath:
    alpha: str
    energies: np.ndarray  # strictly increasing mode energies
    couplings: np.ndarray  # nonnegative couplings V_k

    def __post_init__(self):
        if np.any(np.diff(self.energies) <= 0):
            raise ValueError("mode energies must be strictly increasing")
        if np.any(self.couplings < 0):
            raise ValueError("couplings must be >= 0")

    @property
    def n_modes(self) -> int:
        return len(self.energies)


@dataclass(frozen=True)
class ExactGreens:
    grid: TimeGrid
    u: np.ndarray      # (n+1, 2, 2) dot block of exp(-iHt)
    v: np.ndarray      # (n+1, 2, 2)
    vbar: np.ndarray   # (n+1, 2, 2)
    quartic: np.ndarray  # (n+1,) complex <F1+ F1 F2+ F2>
    correlation: np.ndarray  # (n+1, 2, 2) dot block of <a+ a>


def discretize_bath(
    alpha: str, n_modes: int, p: ModelParams, cutoff: float = 10.0, strategy: str = "uniform"
) -> DiscretizedBath:
    """Uniform midpoint grid on [mu - c W, mu + c W] with V_k^2 = J(e_k) de / 2 pi."""
    if n_modes < 2:
        raise ValueError("need at least 2 modes")
    if strategy != "uniform":
        raise ValueError(f"unknown strategy {strategy!r}")
    res = p.reservoir(alpha)
    lo, hi = res.mu - cutoff * res.width, res.mu + cutoff * res.width
    de = (hi - lo) / n_modes
    energies = lo + de * (np.arange(n_modes) + 0.5)
    couplings = np.sqrt(lorentzian(res, energies) * de / (2 * np.pi))
    return DiscretizedBath(alpha=alpha, energies=energies, couplings=couplings)


def recurrence_horizon(baths) -> float:
    """Conservative safe horizon before finite-bath recurrences: the time for
    the discrete level spacing to accumulate an O(1) phase error, pi / (2 de)."""
    spacings = [float(np.diff(b.energies).max()) for b in baths if b.n_modes]
    if not spacings:
        return math.inf
    return math.pi / (2 * max(spacings))


def _single_particle_hamiltonian(bath_l, bath_r, p: ModelParams) -> np.ndarray:
    nl, nr = bath_l.n_modes, bath_r.n_modes
    dim = 2 + nl + nr
    h = np.zeros((dim, dim), dtype=complex)
    h[:2, :2] = p.hamiltonian()
    sl = slice(2, 2 + nl)
    sr = slice(2 + nl, dim)
    h[sl, sl] = np.diag(bath_l.energies)
    h[sr, sr] = np.diag(bath_r.energies)
    h[SERIAL_DOT_INDEX["L"], sl] = bath_l.couplings
    h[sl, SERIAL_DOT_INDEX["L"]] = bath_l.couplings
    h[SERIAL_DOT_INDEX["R"], sr] = bath_r.couplings
    h[sr, SERIAL_DOT_INDEX["R"]] = bath_r.couplings
    return h


def exact_greens(
    bath_l: DiscretizedBath,
    bath_r: DiscretizedBath,
    p: ModelParams,
    grid: TimeGrid,
    stride: int = 1,
) -> ExactGreens:
    """Exact finite-model u, v, vbar, quartic average, and dot correlations.

    ``stride`` subsamples the grid (every stride-th point) to bound the cost
    of forming the dot rows of exp(-iHt). Refuses horizons beyond the
    recurrence-safe window.
    """
    safe = recurrence_horizon((bath_l, bath_r))
    if grid.horizon > safe:
        raise RecurrenceError(
            f"horizon {grid.horizon:g} exceeds the recurrence-safe window {safe:g}; "
            "increase the mode count or shorten the grid"
        )
    h = _single_particle_hamiltonian(bath_l, bath_r, p)
    evals, vec = np.linalg.eigh(h)
    nl = bath_l.n_modes
    occ_l = fermi_occupation(bath_l.energies, "L", p)
    occ_r = fermi_occupation(bath_r.energies, "R", p)
    bath_occ = np.concatenate([np.atleast_1d(occ_l), np.atleast_1d(occ_r)])

    times = grid.times[::stride]
    n_pts = len(times)
    u = np.empty((n_pts, 2, 2), dtype=complex)
    v = np.empty((n_pts, 2, 2), dtype=complex)
    vbar = np.empty((n_pts, 2, 2), dtype=complex)
    quartic = np.empty(n_pts, dtype=complex)
    corr = np.empty((n_pts, 2, 2), dtype=complex)
    vec_dag_dots = vec.conj().T[:, :2]  # (dim, 2)
    n0 = p.initial_occupation
    for k, t in enumerate(times):
        phases = np.exp(-1j * evals * t)
        rows = (vec[:2] * phases) @ vec.conj().T  # dot rows of exp(-iHt)
        u[k] = rows[:, :2]
        m = rows[:, 2:]  # dot-bath block: F_i(t) = sum_k m_ik c_k(0)
        v[k] = (m * bath_occ) @ m.conj().T
        vbar[k] = (m * (1 - bath_occ)) @ m.conj().T
        quartic[k] = v[k, 0, 0] * v[k, 1, 1] + v[k, 1, 0] * vbar[k, 0, 1]
        corr[k] = u[k].conj() @ n0 @ u[k].T + v[k].T
    sub = TimeGrid(dt=grid.dt * stride, n_steps=n_pts - 1)
    return ExactGreens(grid=sub, u=u, v=v, vbar=vbar, quartic=quartic, correlation=corr)


def exact_density_matrix(eg: ExactGreens) -> DensityMatrixSeries:
    """Density-matrix series implied by the exact dot correlations."""
    c = eg.correlation
    n1, n2 = c[:, 0, 0].real, c[:, 1, 1].real
    rho11 = n1 * n2 - np.abs(c[:, 0, 1]) ** 2
    rho = np.zeros((len(n1), 4, 4), dtype=complex)
    rho[:, 0, 0] = rho11
    rho[:, 1, 1] = n1 - rho11
    rho[:, 2, 2] = n2 - rho11
    rho[:, 3, 3] = 1 - n1 - n2 + rho11
    rho[:, 1, 2] = c[:, 1, 0]
    rho[:, 2, 1] = c[:, 1, 0].conj()
    return DensityMatrixSeries(grid=eg.grid, rho=rho)

"""Closed (isolated) double dot: exact unitary propagator, revival time,
coherence series, Bloch trajectories, and cusp detection.

The 2x2 block Hamiltonian is eigendecomposed analytically (via eigh), so
closed-system results are exact up to floating point and serve as references
for the open-system solver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .propagator import TimeGrid


class NoRevivalError(ValueError):
    """Degenerate levels with no hopping: the state never leaves its pole."""


@dataclass(frozen=True)
class ClosedParams:
    eps11: float = 3.0
    eps22: float = 2.0
    eps12: complex = 0.4

    def hamiltonian(self) -> np.ndarray:
        e12 = complex(self.eps12)
        return np.array(
            [[self.eps11, e12], [np.conj(e12), self.eps22]], dtype=complex
        )

    @property
    def rabi_frequency(self) -> float:
        return math.hypot(self.eps11 - self.eps22, 2 * abs(self.eps12))


def closed_propagator(cp: ClosedParams, t) -> np.ndarray:
    """Unitary u(t) = exp(-i H t); vectorized, shape (..., 2, 2)."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    evals, vec = np.linalg.eigh(cp.hamiltonian())
    phases = np.exp(-1j * np.multiply.outer(t, evals))
    return np.einsum("im,...m,jm->...ij", vec, phases, vec.conj())


def revival_time(cp: ClosedParams) -> float:
    """Period 2 pi / Omega after which the state returns to itself."""
    omega = cp.rabi_frequency
    if omega == 0:
        raise NoRevivalError("degenerate levels with zero hopping never revive")
    return 2 * math.pi / omega


def closed_coherence_series(cp: ClosedParams, grid: TimeGrid) -> np.ndarray:
    """l1 coherence 2|u12 u22| over the grid for the initial |01> state."""
    u = closed_propagator(cp, grid.times)
    return 2 * np.abs(u[:, 0, 1] * u[:, 1, 1])


def closed_bloch_series(cp: ClosedParams, grid: TimeGrid) -> np.ndarray:
    """(x, y, z) trajectory on the Bloch sphere, |01> at the north pole."""
    u = closed_propagator(cp, grid.times)
    rho23 = u[:, 0, 1] * u[:, 1, 1].conj()
    z = np.abs(u[:, 1, 1]) ** 2 - np.abs(u[:, 0, 1]) ** 2
    return np.stack([2 * rho23.real, 2 * rho23.imag, z], axis=-1)


def _local_extrema(series: np.ndarray):
    interior = series[1:-1]
    maxima = np.nonzero((interior > series[:-2]) & (interior >= series[2:]))[0] + 1
    minima = np.nonzero((interior < series[:-2]) & (interior <= series[2:]))[0] + 1
    return maxima, minima


def has_cusp(series: np.ndarray, touch_tol: float = 1e-3) -> bool:
    """Two near-unity local maxima separated by a strict local minimum.

    ``series`` should cover (at least) one revival period. The tolerance
    absorbs grid discretization around the quadratic maxima.
    """
    maxima, minima = _local_extrema(series)
    touches = [k for k in maxima if series[k] >= 1 - touch_tol]
    for a, b in zip(touches[:-1], touches[1:]):
        if any(a < m < b for m in minima):
            return True
    return False


def cusp_threshold(
    cp_base: ClosedParams,
    eps12_values,
    samples_per_period: int = 4000,
    touch_tol: float = 1e-3,
):
    """Smallest hopping on the sweep grid whose coherence shows a cusp.

    Returns None when no value in range produces one.
    """
    for e12 in sorted(float(v) for v in eps12_values):
        if e12 == 0:
            continue
        cp = ClosedParams(eps11=cp_base.eps11, eps22=cp_base.eps22, eps12=e12)
        period = revival_time(cp)
        grid = TimeGrid(dt=period / samples_per_period, n_steps=samples_per_period)
        if has_cusp(closed_coherence_series(cp, grid), touch_tol):
            return e12
    return None

"""Physical model of the serially coupled double dot: parameters, Lorentzian
spectral densities, Fermi occupations, and the analytic memory kernel.

Units: hbar = 1, all energies in units of a reference coupling scale, time in
its inverse. Zero temperature is marked by ``beta = math.inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ZERO_TEMPERATURE = math.inf

#: dot index coupled to each reservoir in the serial geometry
SERIAL_DOT_INDEX = {"L": 0, "R": 1}


class ModelError(ValueError):
    """Invalid physical parameters."""


@dataclass(frozen=True)
class ReservoirParams:
    """One fermionic reservoir: coupling strength, Lorentzian half-width,
    chemical potential, inverse temperature (inf = zero temperature)."""

    gamma: float
    width: float
    mu: float
    beta: float = ZERO_TEMPERATURE

    def __post_init__(self):
        if self.gamma < 0:
            raise ModelError(f"gamma must be >= 0, got {self.gamma}")
        if self.width <= 0:
            raise ModelError(f"width must be > 0, got {self.width}")
        if not (self.beta > 0):
            raise ModelError(f"beta must be > 0 or inf, got {self.beta}")


def _default_occupation() -> np.ndarray:
    # initial state |01>: first dot empty, second dot occupied
    return np.diag([0.0, 1.0]).astype(complex)


@dataclass(frozen=True)
class ModelParams:
    """All physical parameters of the double dot + two reservoirs."""

    eps11: float = 3.0
    eps22: float = 2.0
    eps12: complex = 0.4
    left: ReservoirParams = field(
        default_factory=lambda: ReservoirParams(gamma=5.0, width=2.0, mu=5.0)
    )
    right: ReservoirParams = field(
        default_factory=lambda: ReservoirParams(gamma=5.0, width=2.0, mu=-5.0)
    )
    initial_occupation: np.ndarray = field(default_factory=_default_occupation)

    def __post_init__(self):
        n0 = np.asarray(self.initial_occupation, dtype=complex)
        if n0.shape != (2, 2):
            raise ModelError("initial_occupation must be a 2x2 matrix")
        if not np.allclose(n0, n0.conj().T, atol=1e-12):
            raise ModelError("initial_occupation must be Hermitian")
        evals = np.linalg.eigvalsh(n0)
        if evals.min() < -1e-12 or evals.max() > 1 + 1e-12:
            raise ModelError(
                f"initial_occupation eigenvalues must lie in [0, 1], got {evals}"
            )
        object.__setattr__(self, "initial_occupation", n0)

    def reservoir(self, alpha: str) -> ReservoirParams:
        if alpha == "L":
            return self.left
        if alpha == "R":
            return self.right
        raise ModelError(f"unknown reservoir {alpha!r}")

    def hamiltonian(self) -> np.ndarray:
        """2x2 Hermitian single-particle Hamiltonian of the dots."""
        e12 = complex(self.eps12)
        return np.array(
            [[self.eps11, e12], [np.conj(e12), self.eps22]], dtype=complex
        )


@dataclass(frozen=True)
class SpectralConfig:
    """Frequency-quadrature settings for the noise-correlation integrals.

    ``nodes_per_reservoir`` Gauss-Legendre nodes are distributed over graded
    panels covering ``mu +- cutoff_multiplier * width`` for each reservoir;
    the two rays beyond the cutoff are handled by an asymptotic correction.
    ``cutoff_cap`` bounds the half-window in absolute energy, which keeps
    the node count affordable for very wide reservoirs: the asymptotic tail
    is controlled by the absolute energy scale, not by the energy in units
    of the width. The defaults hold the anticommutator sum rule below 1e-8
    on the reference grid. The coupling geometry is fixed to the serial
    configuration.
    """

    nodes_per_reservoir: int = 1600
    cutoff_multiplier: float = 64.0
    cutoff_cap: float = math.inf
    geometry: str = "serial"

    def __post_init__(self):
        if self.nodes_per_reservoir < 2:
            raise ModelError("nodes_per_reservoir must be >= 2")
        if self.cutoff_multiplier < 5:
            raise ModelError("cutoff_multiplier must be >= 5")
        if not self.cutoff_cap > 0:
            raise ModelError("cutoff_cap must be positive")
        if self.geometry != "serial":
            raise ModelError("only the serial coupling geometry is supported")


def lorentzian(res: ReservoirParams, eps) -> np.ndarray:
    """Scalar Lorentzian profile gamma * W^2 / ((eps - mu)^2 + W^2)."""
    eps = np.asarray(eps, dtype=float)
    return res.gamma * res.width**2 / ((eps - res.mu) ** 2 + res.width**2)


def spectral_density(alpha: str, eps: float, p: ModelParams) -> np.ndarray:
    """2x2 spectral-density matrix of reservoir ``alpha`` at energy ``eps``.

    Serial geometry: the left reservoir couples only to dot 1 (entry (0, 0)),
    the right reservoir only to dot 2 (entry (1, 1)).
    """
    res = p.reservoir(alpha)
    j = np.zeros((2, 2))
    idx = SERIAL_DOT_INDEX[alpha]
    j[idx, idx] = lorentzian(res, eps)
    return j


def fermi_occupation(eps, alpha: str, p: ModelParams):
    """Fermi-Dirac occupation of reservoir ``alpha`` at energy ``eps``.

    At zero temperature this is the step theta(mu - eps) with f(mu) = 1/2.
    Vectorized over ``eps``.
    """
    res = p.reservoir(alpha)
    eps = np.asarray(eps, dtype=float)
    if math.isinf(res.beta):
        out = np.where(eps < res.mu, 1.0, np.where(eps > res.mu, 0.0, 0.5))
        return out if out.ndim else float(out)
    # logistic with overflow-safe evaluation on both sides of mu
    x = res.beta * (eps - res.mu)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = np.exp(-x[pos]) / (1.0 + np.exp(-x[pos]))
    out[~pos] = 1.0 / (1.0 + np.exp(x[~pos]))
    return out if out.ndim else float(out)


def memory_kernel(alpha: str, dt, p: ModelParams) -> np.ndarray:
    """Analytic memory kernel of reservoir ``alpha`` at time difference dt >= 0.

    For the Lorentzian spectral density the frequency integral closes on a
    single pole, leaving (gamma * W / 2) * exp(-i mu dt - W dt) on the coupled
    diagonal entry. If ``dt`` is an array the result has shape (..., 2, 2).
    """
    dt_arr = np.asarray(dt, dtype=float)
    if np.any(dt_arr < 0):
        raise ModelError("memory kernel requires dt >= 0")
    res = p.reservoir(alpha)
    scalar = 0.5 * res.gamma * res.width * np.exp(-(1j * res.mu + res.width) * dt_arr)
    out = np.zeros(dt_arr.shape + (2, 2), dtype=complex)
    idx = SERIAL_DOT_INDEX[alpha]
    out[..., idx, idx] = scalar
    return out


def reference_defaults(**overrides) -> ModelParams:
    """Strong-coupling non-Markovian defaults used throughout the time-series
    runs: gammas 5, widths 2, mu = +-5, dot energies 3 and 2, hopping 0.4."""
    return ModelParams(**overrides)

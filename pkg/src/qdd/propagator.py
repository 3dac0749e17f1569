"""Retarded Green's function of the dots on a uniform time grid.

The 2x2 propagator u(t) solves the Volterra integro-differential equation

    du/dt + i eps u + sum_alpha integral_0^t g_alpha(t - tau) u(tau) dtau = 0,

with u(0) = I. Two interchangeable backends are provided:

* ``aux-ode`` (default): the Lorentzian kernel is a single complex exponential
  per reservoir, so the convolution y_alpha(t) = int g_alpha(t-tau) u(tau) dtau
  obeys dy/dt = g_alpha(0) u - (i mu + W) y. The enlarged linear system is
  advanced with the classical 4th-order Runge-Kutta step, which for a constant
  system matrix reduces to one precomputed 6x6 step matrix.
* ``volterra``: direct trapezoidal convolution with a two-step
  predictor-corrector; slower but kernel-agnostic, kept as a cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, SERIAL_DOT_INDEX, memory_kernel

BACKENDS = ("aux-ode", "volterra")


class StepSizeError(RuntimeError):
    """Raised when the time step is too large for a contractive solution."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_k = k * dt, k = 0..n_steps (t0 fixed at 0)."""

    dt: float
    n_steps: int

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_steps + 1)

    @property
    def horizon(self) -> float:
        return self.dt * self.n_steps

    def halved(self) -> "TimeGrid":
        return TimeGrid(self.dt / 2, 2 * self.n_steps)


@dataclass(frozen=True)
class PropagatorGrid:
    grid: TimeGrid
    u: np.ndarray  # (n_steps + 1, 2, 2) complex

    def __post_init__(self):
        if self.u.shape != (self.grid.n_steps + 1, 2, 2):
            raise ValueError("u shape does not match grid")


def _reservoir_terms(p: ModelParams):
    """(coupled dot index, kernel value at 0, complex decay rate) per reservoir."""
    terms = []
    for alpha in ("L", "R"):
        res = p.reservoir(alpha)
        if res.gamma == 0:
            continue
        idx = SERIAL_DOT_INDEX[alpha]
        g0 = 0.5 * res.gamma * res.width
        lam = 1j * res.mu + res.width
        terms.append((idx, g0, lam))
    return terms


def _check_contractive(u: np.ndarray, dt: float, tol: float = 1e-6):
    smax = np.linalg.svd(u, compute_uv=False)[:, 0].max()
    if smax > 1 + tol:
        raise StepSizeError(
            f"propagator singular value reached {smax:.6g} > 1 + {tol:g}; "
            f"the scheme is unstable at dt = {dt:g}, retry with dt <= {dt / 4:g}"
        )


def _solve_aux_ode(p: ModelParams, grid: TimeGrid) -> np.ndarray:
    terms = _reservoir_terms(p)
    n_aux = len(terms)
    dim = 2 * (1 + n_aux)
    a = np.zeros((dim, dim), dtype=complex)
    a[:2, :2] = -1j * p.hamiltonian()
    for m, (idx, g0, lam) in enumerate(terms):
        r = 2 * (1 + m)
        a[:2, r : r + 2] = -np.eye(2)
        a[r + idx, idx] = g0
        a[r : r + 2, r : r + 2] -= lam * np.eye(2)
    # classical RK4 with a constant system matrix: one exact step matrix
    adt = a * grid.dt
    step = np.eye(dim, dtype=complex)
    term = np.eye(dim, dtype=complex)
    for k in range(1, 5):
        term = term @ adt / k
        step += term

    z = np.zeros((dim, 2), dtype=complex)
    z[:2] = np.eye(2)
    u = np.empty((grid.n_steps + 1, 2, 2), dtype=complex)
    u[0] = np.eye(2)
    for k in range(grid.n_steps):
        z = step @ z
        u[k + 1] = z[:2]
    return u


def _kernel_rows(p: ModelParams, grid: TimeGrid):
    """Sampled scalar kernels g_alpha(t_k) with the coupled dot index."""
    rows = []
    times = grid.times
    for alpha in ("L", "R"):
        res = p.reservoir(alpha)
        if res.gamma == 0:
            continue
        idx = SERIAL_DOT_INDEX[alpha]
        gs = 0.5 * res.gamma * res.width * np.exp(-(1j * res.mu + res.width) * times)
        rows.append((idx, gs))
    return rows


def _solve_volterra(p: ModelParams, grid: TimeGrid) -> np.ndarray:
    """Two-step Adams-Bashforth predictor + trapezoidal corrector, with the
    memory convolution evaluated by the trapezoidal rule over the history."""
    h_s = p.hamiltonian()
    dt = grid.dt
    n = grid.n_steps
    rows = _kernel_rows(p, grid)
    u = np.empty((n + 1, 2, 2), dtype=complex)
    u[0] = np.eye(2)

    def conv(k: int, endpoint: np.ndarray) -> np.ndarray:
        # trapezoid over [0, t_k]; `endpoint` supplies u(t_k)
        out = np.zeros((2, 2), dtype=complex)
        if k == 0:
            return out
        for idx, gs in rows:
            acc = 0.5 * gs[k] * u[0, idx, :] + 0.5 * gs[0] * endpoint[idx, :]
            if k > 1:
                acc = acc + gs[k - 1 : 0 : -1] @ u[1:k, idx, :]
            out[idx, :] += dt * acc
        return out

    def rhs(k: int, endpoint: np.ndarray) -> np.ndarray:
        return -1j * (h_s @ endpoint) - conv(k, endpoint)

    f_prev = rhs(0, u[0])
    # bootstrap with one corrected Euler (Heun) step
    pred = u[0] + dt * f_prev
    f1 = rhs(1, pred)
    u[1] = u[0] + 0.5 * dt * (f_prev + f1)
    f_prev2, f_prev = f_prev, rhs(1, u[1])
    for k in range(1, n):
        pred = u[k] + dt * (1.5 * f_prev - 0.5 * f_prev2)
        f_pred = rhs(k + 1, pred)
        u[k + 1] = u[k] + 0.5 * dt * (f_prev + f_pred)
        # one more corrector pass with the updated endpoint
        f_corr = rhs(k + 1, u[k + 1])
        u[k + 1] = u[k] + 0.5 * dt * (f_prev + f_corr)
        f_prev2, f_prev = f_prev, rhs(k + 1, u[k + 1])
    return u


def solve_retarded(
    p: ModelParams, grid: TimeGrid, backend: str = "aux-ode"
) -> PropagatorGrid:
    """Solve for u(t) on the grid. Raises StepSizeError if dt is too coarse."""
    if backend == "aux-ode":
        u = _solve_aux_ode(p, grid)
    elif backend == "volterra":
        u = _solve_volterra(p, grid)
    else:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    _check_contractive(u, grid.dt)
    return PropagatorGrid(grid=grid, u=u)


def propagator_residual(p: ModelParams, pg: PropagatorGrid) -> float:
    """Max-norm residual of the Volterra equation over interior grid points.

    du/dt is taken from a 5-point central stencil and the convolution from the
    trapezoidal rule, so the result measures consistency at that order rather
    than the backend's internal error.
    """
    grid, u = pg.grid, pg.u
    n, dt = grid.n_steps, grid.dt
    if n < 4:
        raise ValueError("residual needs at least 5 grid points")
    from scipy.signal import fftconvolve

    conv = np.zeros_like(u)
    for idx, gs in _kernel_rows(p, grid):
        for j in range(2):
            full = fftconvolve(gs, u[:, idx, j])[: n + 1]
            # trapezoid = full Riemann convolution minus half the end terms
            conv[:, idx, j] += dt * (full - 0.5 * gs * u[0, idx, j] - 0.5 * gs[0] * u[:, idx, j])

    dudt = np.empty_like(u)
    dudt[2:-2] = (u[:-4] - 8 * u[1:-3] + 8 * u[3:-1] - u[4:]) / (12 * dt)
    resid = dudt[2:-2] + 1j * np.einsum("ij,kjl->kil", p.hamiltonian(), u[2:-2]) + conv[2:-2]
    return float(np.abs(resid).max())

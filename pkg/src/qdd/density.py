"""Assembly of the full 4x4 dot density matrix from u, v, vbar.

Basis order (|11>, |10>, |01>, |00>). The initial dot state is a
number-diagonal Gaussian, the reservoirs are thermal, and the Hamiltonian is
quadratic, so the dot state stays a number-conserving fermionic Gaussian at
all times. Every entry then follows from the single-particle correlation
matrix C_jk(t) = <a_j+(t) a_k(t)> by Wick's theorem:

    rho_11 = C11 C22 - |C12|^2         (both dots occupied)
    rho_22 = C11 - rho_11              rho_33 = C22 - rho_11
    rho_44 = 1 - rho_11 - rho_22 - rho_33
    rho_23 = C21, rho_32 = conj(rho_23); all other off-diagonals vanish.

This is the general form of the printed per-term expansion, which is the
special case of the initial |01> state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams
from .noise import NoiseCorrelations
from .propagator import PropagatorGrid, TimeGrid


class PhysicalityError(RuntimeError):
    """The assembled density matrix violates positivity or normalization."""


@dataclass(frozen=True)
class DensityMatrixSeries:
    grid: TimeGrid
    rho: np.ndarray  # (n_steps + 1, 4, 4) complex Hermitian, unit trace


def correlation_matrix(pg: PropagatorGrid, nc: NoiseCorrelations, p: ModelParams) -> np.ndarray:
    """C(t)_jk = <a_j+(t) a_k(t)> on the grid, shape (n+1, 2, 2).

    From a_i(t) = sum_j u_ij a_j(0) + F_i with <F_j+ F_i> = v_ij:
    C = conj(u) n0 u^T + v^T.
    """
    n0 = p.initial_occupation
    unitary_part = np.einsum("tjm,mn,tkn->tjk", pg.u.conj(), n0, pg.u, optimize=True)
    return unitary_part + nc.v.transpose(0, 2, 1)


def quartic_noise_average(nc: NoiseCorrelations, k: int) -> complex:
    """<F1+ F1 F2+ F2> at grid index k via fermionic Wick factorization.

    The reservoirs are thermal and the coupling bilinear, so the noise is
    Gaussian and the quartic average factorizes as v11 v22 + v21 vbar12
    (anomalous pairings vanish for number-conserving baths). The value is
    complex in general: F1+ F1 and F2+ F2 do not commute, so this ordered
    product is not an observable on its own; imaginary parts cancel against
    the mixed propagator/noise terms of <n1 n2>.
    """
    v, vb = nc.v[k], nc.vbar[k]
    return complex(v[0, 0] * v[1, 1] + v[1, 0] * vb[0, 1])


def assemble_rho(
    pg: PropagatorGrid, nc: NoiseCorrelations, p: ModelParams, check: bool = True
) -> DensityMatrixSeries:
    """Full density-matrix series; raises PhysicalityError on a bad state."""
    c = correlation_matrix(pg, nc, p)
    n1 = c[:, 0, 0].real
    n2 = c[:, 1, 1].real
    rho11 = n1 * n2 - np.abs(c[:, 0, 1]) ** 2
    rho23 = c[:, 1, 0]

    n = pg.grid.n_steps
    rho = np.zeros((n + 1, 4, 4), dtype=complex)
    rho[:, 0, 0] = rho11
    rho[:, 1, 1] = n1 - rho11
    rho[:, 2, 2] = n2 - rho11
    rho[:, 3, 3] = 1 - n1 - n2 + rho11
    rho[:, 1, 2] = rho23
    rho[:, 2, 1] = rho23.conj()

    if check:
        traces = np.einsum("tii->t", rho).real
        if np.abs(traces - 1).max() > 1e-8:
            raise PhysicalityError(
                f"trace deviates from 1 by {np.abs(traces - 1).max():.3e}; "
                "tighten the energy quadrature (more nodes / larger cutoff)"
            )
        evals = np.linalg.eigvalsh(rho)
        if evals.min() < -1e-6:
            k = int(np.unravel_index(evals.argmin(), evals.shape)[0])
            raise PhysicalityError(
                f"negative eigenvalue {evals.min():.3e} at t = {pg.grid.times[k]:.4g}; "
                "tighten the energy quadrature (more nodes / larger cutoff)"
            )
    return DensityMatrixSeries(grid=pg.grid, rho=rho)


def reduce_dot(rho: np.ndarray, which: int) -> np.ndarray:
    """2x2 reduced state of dot 1 or 2 (partial trace over the other dot).

    Under the number-conserving sparsity pattern both reductions are exactly
    diagonal, ordered (occupied, empty).
    """
    if which == 1:
        occ = rho[0, 0] + rho[1, 1]
    elif which == 2:
        occ = rho[0, 0] + rho[2, 2]
    else:
        raise ValueError("which must be 1 or 2")
    return np.diag([occ.real, 1 - occ.real]).astype(complex)

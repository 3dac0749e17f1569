"""Density-matrix assembly from the Gaussian correlation data."""
import numpy as np
import pytest

import qdd
from qdd.density import correlation_matrix, quartic_noise_average, reduce_dot


def test_initial_state_is_01(short_dm):
    # basis order (|11>, |10>, |01>, |00>)
    expected = np.diag([0.0, 0.0, 1.0, 0.0]).astype(complex)
    np.testing.assert_allclose(short_dm.rho[0], expected, atol=1e-12)


def test_trace_and_hermiticity(short_dm):
    rho = short_dm.rho
    traces = np.einsum("tii->t", rho)
    np.testing.assert_allclose(traces, 1.0, atol=1e-10)
    np.testing.assert_allclose(rho, rho.conj().transpose(0, 2, 1), atol=1e-14)


def test_positivity(short_dm):
    assert np.linalg.eigvalsh(short_dm.rho).min() > -1e-8


def test_forbidden_off_diagonals_are_structural_zeros(short_dm):
    # the Hamiltonian conserves particle number and the bath is thermal, so
    # only the single-excitation block (|10>, |01>) carries coherence
    mask = np.ones((4, 4), dtype=bool)
    mask[np.diag_indices(4)] = False
    mask[1, 2] = mask[2, 1] = False
    assert np.abs(short_dm.rho[:, mask]).max() == 0.0


def test_quartic_average_bounds(short_nc):
    for k in (0, 100, 1000, 3000):
        q = quartic_noise_average(short_nc, k)
        assert 0.0 <= q.real <= 1.0
        assert abs(q) <= 1.0


def test_double_occupation_consistency(short_pg, short_nc, defaults, short_dm):
    # rho11 must equal <n1 n2>; cross-check one interior point against a
    # direct Wick expansion of <a1+ a1 a2+ a2> in terms of C and the noise
    k = 1500
    c = correlation_matrix(short_pg, short_nc, defaults)[k]
    rho11 = short_dm.rho[k, 0, 0].real
    direct = (c[0, 0] * c[1, 1] - abs(c[0, 1]) ** 2).real
    assert rho11 == pytest.approx(direct, abs=1e-12)


def test_reduce_dot_traces(short_dm):
    k = 700
    r1 = reduce_dot(short_dm.rho[k], 1)
    r2 = reduce_dot(short_dm.rho[k], 2)
    for r in (r1, r2):
        assert np.trace(r).real == pytest.approx(1.0, abs=1e-12)
        # reduced states are diagonal: local coherences vanish identically
        assert abs(r[0, 1]) < 1e-14
    assert r1[0, 0].real == pytest.approx(
        (short_dm.rho[k, 0, 0] + short_dm.rho[k, 1, 1]).real, abs=1e-12
    )


def test_unphysical_correlations_rejected(short_pg, defaults):
    n = short_pg.grid.n_steps
    bad = np.tile(1.5 * np.eye(2, dtype=complex), (n + 1, 1, 1))
    nc = qdd.NoiseCorrelations(grid=short_pg.grid, v=bad, vbar=bad)
    with pytest.raises(qdd.PhysicalityError):
        qdd.assemble_rho(short_pg, nc, defaults)

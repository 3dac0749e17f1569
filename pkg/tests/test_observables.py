"""Coherence, entropy, correlation, and transport observables."""
import numpy as np
import pytest

import qdd
from qdd.observables import (
    bloch_coordinates,
    correlated_coherence,
    l1_coherence,
    mutual_information,
    purity,
    relative_entropy_coherence,
    von_neumann_entropy,
)


def _pure_single_excitation(a, b):
    """|psi> = a |10> + b |01> embedded in the 4x4 occupation basis."""
    psi = np.array([0.0, a, b, 0.0], dtype=complex)
    return np.outer(psi, psi.conj())


def test_scalar_measures_on_pure_states():
    rho = _pure_single_excitation(1 / np.sqrt(2), 1 / np.sqrt(2))
    assert l1_coherence(rho) == pytest.approx(1.0)
    # entropic measures are in bits
    assert relative_entropy_coherence(rho) == pytest.approx(1.0)
    assert purity(rho) == pytest.approx(1.0)
    assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-12)
    assert mutual_information(rho) == pytest.approx(2.0)
    assert correlated_coherence(rho) == pytest.approx(l1_coherence(rho))


def test_measures_on_maximally_mixed():
    rho = np.eye(4, dtype=complex) / 4
    assert l1_coherence(rho) == 0.0
    assert relative_entropy_coherence(rho) == pytest.approx(0.0, abs=1e-12)
    assert purity(rho) == pytest.approx(0.25)
    assert von_neumann_entropy(rho) == pytest.approx(2.0)
    assert mutual_information(rho) == pytest.approx(0.0, abs=1e-12)


def test_bloch_poles_and_equator():
    x, y, z = bloch_coordinates(_pure_single_excitation(0.0, 1.0))
    assert (x, y, z) == pytest.approx((0.0, 0.0, 1.0))
    x, y, z = bloch_coordinates(_pure_single_excitation(1.0, 0.0))
    assert (x, y, z) == pytest.approx((0.0, 0.0, -1.0))
    x, y, z = bloch_coordinates(_pure_single_excitation(1 / np.sqrt(2), 1 / np.sqrt(2)))
    assert (x, y, z) == pytest.approx((1.0, 0.0, 0.0))


def test_series_matches_scalar_functions(short_dm, short_obs):
    for k in (0, 500, 2500):
        rho = short_dm.rho[k]
        assert short_obs.c_l1[k] == pytest.approx(l1_coherence(rho), abs=1e-12)
        assert short_obs.purity[k] == pytest.approx(purity(rho), abs=1e-12)
        assert short_obs.von_neumann_entropy[k] == pytest.approx(
            von_neumann_entropy(rho), abs=1e-12
        )
        assert short_obs.mutual_information[k] == pytest.approx(
            mutual_information(rho), abs=1e-12
        )
        assert short_obs.n1[k] == pytest.approx(
            (rho[0, 0] + rho[1, 1]).real, abs=1e-12
        )


def test_coherence_starts_at_zero(short_obs):
    assert short_obs.c_l1[0] < 1e-12
    assert short_obs.c_rel_entropy[0] == pytest.approx(0.0, abs=1e-12)


def test_entropy_ordering(short_obs):
    # dephasing can only add entropy: S(diag rho) >= S(rho)
    gap = short_obs.shannon_diagonal_entropy - short_obs.von_neumann_entropy
    assert gap.min() > -1e-12
    np.testing.assert_allclose(gap, short_obs.c_rel_entropy, atol=1e-12)


def test_mutual_information_nonnegative(short_obs):
    assert short_obs.mutual_information.min() > -1e-12


def test_currents_balance_occupation_change(short_obs):
    # I_L and I_R count particles returning to the reservoirs, so their sum
    # must track -d(n1 + n2)/dt on the grid
    dt = short_obs.grid.dt
    total = short_obs.n1 + short_obs.n2
    dndt = np.gradient(total, dt)
    flow = short_obs.current_left + short_obs.current_right
    assert np.abs(dndt[2:-2] + flow[2:-2]).max() < 1e-6


def test_closed_system_has_no_currents(defaults):
    p = qdd.reference_defaults(
        left=qdd.ReservoirParams(gamma=0.0, width=2.0, mu=5.0),
        right=qdd.ReservoirParams(gamma=0.0, width=2.0, mu=-5.0),
    )
    grid = qdd.TimeGrid(dt=1e-3, n_steps=1000)
    pg = qdd.solve_retarded(p, grid)
    nc = qdd.compute_noise_correlations(pg, qdd.SpectralConfig(600, 32.0), p)
    obs = qdd.compute_observables(qdd.assemble_rho(pg, nc, p), p)
    assert np.abs(obs.current_left).max() < 1e-6
    assert np.abs(obs.current_right).max() < 1e-6
    np.testing.assert_allclose(obs.purity, 1.0, atol=1e-8)

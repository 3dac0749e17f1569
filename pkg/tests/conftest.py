"""Shared fixtures: one short reference evolution reused across test modules.

The full pipeline at the reference parameter point costs several seconds, so
the propagator/noise/density stages are computed once per session on a
shortened grid and shared read-only.
"""
import numpy as np
import pytest

import qdd


@pytest.fixture(scope="session")
def defaults():
    return qdd.reference_defaults()


@pytest.fixture(scope="session")
def short_grid():
    return qdd.TimeGrid(dt=1e-3, n_steps=3000)


@pytest.fixture(scope="session")
def light_spectral():
    # enough nodes for ~1e-7 sum-rule accuracy; cheap enough for unit tests
    return qdd.SpectralConfig(nodes_per_reservoir=600, cutoff_multiplier=32.0)


@pytest.fixture(scope="session")
def short_pg(defaults, short_grid):
    return qdd.solve_retarded(defaults, short_grid)


@pytest.fixture(scope="session")
def short_nc(short_pg, light_spectral, defaults):
    return qdd.compute_noise_correlations(short_pg, light_spectral, defaults)


@pytest.fixture(scope="session")
def short_dm(short_pg, short_nc, defaults):
    return qdd.assemble_rho(short_pg, short_nc, defaults)


@pytest.fixture(scope="session")
def short_obs(short_dm, defaults):
    return qdd.compute_observables(short_dm, defaults)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260826)

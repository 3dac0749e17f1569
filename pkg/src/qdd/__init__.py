"""Exact non-Markovian dynamics of a serially coupled double quantum dot.

Pipeline: retarded propagator u(t) (two interchangeable solvers), noise
correlations v/vbar by spectral quadrature, fermionic-Gaussian density-matrix
assembly, coherence/correlation/transport observables, closed-system
analytics, a discretized-bath cross-validation oracle, and a parameter-sweep
harness. All computations are deterministic.
"""
from .closed import (
    ClosedParams,
    NoRevivalError,
    closed_bloch_series,
    closed_coherence_series,
    closed_propagator,
    cusp_threshold,
    has_cusp,
    revival_time,
)
from .density import DensityMatrixSeries, PhysicalityError, assemble_rho, reduce_dot
from .io import ConfigError, RunConfig, load_config, parse_config
from .model import (
    ZERO_TEMPERATURE,
    ModelError,
    ModelParams,
    ReservoirParams,
    SpectralConfig,
    fermi_occupation,
    memory_kernel,
    reference_defaults,
    spectral_density,
)
from .noise import (
    NoiseCorrelations,
    QuadratureError,
    check_quadrature_convergence,
    compute_noise_correlations,
    sum_rule_residual,
)
from .observables import ObservableSeries, bloch_coordinates, compute_observables
from .oracle import (
    DiscretizedBath,
    ExactGreens,
    RecurrenceError,
    discretize_bath,
    exact_density_matrix,
    exact_greens,
    recurrence_horizon,
)
from .propagator import (
    BACKENDS,
    PropagatorGrid,
    StepSizeError,
    TimeGrid,
    propagator_residual,
    solve_retarded,
)
from .sweep import SweepResult, SweepSpec, detect_steady_state, evolve_observables, run_sweep

__version__ = "0.1.0"

"""Equal-time noise correlation matrices v(t) = <F+ F> and vbar(t) = <F F+>.

Using time-translation invariance of the propagator, the double time integral
collapses to the running Fourier accumulation K(t, eps) = int_0^t u(s) e^{i eps s} ds,
so that per reservoir

    v(t)    += int deps/2pi f(eps)       J(eps) |K(t, eps) e_c|^2-outer,
    vbar(t) += int deps/2pi (1 - f(eps)) J(eps) |K(t, eps) e_c|^2-outer,

where e_c is the dot column the reservoir couples to. The energy integral is a
Gauss-Legendre panel quadrature graded around each chemical potential, where
the zero-temperature Fermi step sits; v and vbar share nodes and K so their
sum rule reflects genuine quadrature accuracy.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .model import ModelParams, SpectralConfig, SERIAL_DOT_INDEX, lorentzian, fermi_occupation
from .propagator import PropagatorGrid, TimeGrid

_EPS_CHUNK = 64

#: panel boundaries per side, in units of the reservoir half-width
_PANEL_EDGES = (0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0)


class QuadratureError(RuntimeError):
    """Energy quadrature failed its convergence gate."""


@dataclass(frozen=True)
class NoiseCorrelations:
    grid: TimeGrid
    v: np.ndarray  # (n_steps + 1, 2, 2) Hermitian
    vbar: np.ndarray  # (n_steps + 1, 2, 2) Hermitian


def _side_panels(width: float, cutoff: float, beta: float) -> list[tuple[float, float]]:
    """Panel edges for one side of mu, in units of width, from 0 to cutoff."""
    edges = [b for b in _PANEL_EDGES if b < cutoff] + [cutoff]
    if math.isfinite(beta):
        # resolve the thermal boundary layer around mu
        for b in (5.0 / (beta * width), 20.0 / (beta * width)):
            if 0 < b < cutoff:
                edges.append(b)
    edges = sorted(set(edges))
    return list(zip(edges[:-1], edges[1:]))


def _effective_cutoff(res, cfg: SpectralConfig) -> float:
    """Half-window in units of the reservoir width, honouring the energy cap."""
    return min(cfg.cutoff_multiplier, cfg.cutoff_cap / res.width)


def reservoir_nodes(alpha: str, p: ModelParams, cfg: SpectralConfig):
    """Gauss-Legendre nodes and weights for one reservoir's energy integral.

    Nodes cover [mu - c*W, mu + c*W], split at mu, with per-panel node counts
    graded by the square root of the panel width.
    """
    res = p.reservoir(alpha)
    panels = _side_panels(res.width, _effective_cutoff(res, cfg), res.beta)
    per_side = max(cfg.nodes_per_reservoir // 2, len(panels))
    # allocate proportionally to panel width: Gauss-Legendre needs node
    # density set by the fastest e^{i eps t} oscillation, uniform in eps
    sizes = np.array([b - a for a, b in panels])
    counts = np.maximum(16, np.round(per_side * sizes / sizes.sum()).astype(int))
    nodes, weights = [], []
    for (a, b), m in zip(panels, counts):
        x, w = np.polynomial.legendre.leggauss(int(m))
        for lo, hi in ((a, b), (-b, -a)):  # above and below mu
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            nodes.append(res.mu + res.width * (mid + half * x))
            weights.append(res.width * half * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _accumulate_reservoir(pg: PropagatorGrid, alpha: str, p: ModelParams,
                          eps: np.ndarray, w: np.ndarray, v: np.ndarray,
                          vbar: np.ndarray) -> None:
    """Add one reservoir's quadrature contribution to v and vbar in place."""
    res = p.reservoir(alpha)
    col = SERIAL_DOT_INDEX[alpha]
    times = pg.grid.times
    dt = pg.grid.dt
    ucol = pg.u[:, :, col]  # (n+1, 2)
    wv = w * lorentzian(res, eps) * fermi_occupation(eps, alpha, p) / (2 * np.pi)
    wb = w * lorentzian(res, eps) * (1 - fermi_occupation(eps, alpha, p)) / (2 * np.pi)
    for start in range(0, len(eps), _EPS_CHUNK):
        sl = slice(start, start + _EPS_CHUNK)
        phase = np.exp(1j * np.outer(times, eps[sl]))  # (n+1, q)
        integrand = phase[:, :, None] * ucol[:, None, :]  # (n+1, q, 2)
        # running trapezoidal accumulation K(t_k, eps) = int_0^{t_k} u e^{i eps s} ds,
        # with Gregory end corrections lifting the order to O(dt^4)
        k = np.empty_like(integrand)
        k[0] = 0.0
        np.cumsum(0.5 * dt * (integrand[:-1] + integrand[1:]), axis=0, out=k[1:])
        g = integrand
        if len(g) > 3:
            d1_0 = g[1] - g[0]
            d2_0 = g[2] - 2 * g[1] + g[0]
            d3_0 = g[3] - 3 * g[2] + 3 * g[1] - g[0]
            k[3:] -= (dt / 12) * ((g[3:] - g[2:-1]) - d1_0)
            k[3:] -= (dt / 24) * ((g[3:] - 2 * g[2:-1] + g[1:-2]) + d2_0)
            k[3:] -= (19 * dt / 720) * (
                (g[3:] - 3 * g[2:-1] + 3 * g[1:-2] - g[:-3]) - d3_0)
        kc = k.conj()
        v += np.einsum("tqi,q,tqj->tij", k, wv[sl], kc, optimize=True)
        vbar += np.einsum("tqi,q,tqj->tij", k, wb[sl], kc, optimize=True)


_TAIL_NODES = 64


def _fermi_complex(eps, res, hole: bool):
    """f (or 1 - f for ``hole``) evaluated off the real axis, overflow-safe.

    At zero temperature (infinite beta) the occupation is constant on each
    tail ray: 1 below the chemical potential, 0 above.
    """
    x = res.beta * (eps - res.mu) if math.isfinite(res.beta) else None
    if x is None:
        below = np.real(eps) < res.mu
        f = np.where(below, 1.0, 0.0).astype(complex)
        return 1.0 - f if hole else f
    pos = np.real(x) > 0
    xs = np.where(pos, -x, x)  # exponent with negative real part
    ex = np.exp(xs)
    f = np.where(pos, ex / (1 + ex), 1 / (1 + ex))
    return 1.0 - f if hole else f


def _ray_moments(res, upper: bool, hole: bool, times: np.ndarray, e_cut: float):
    """Tail-ray integrals I_m(sigma) of J(eps) f(eps) e^{i sigma eps t} / eps^m.

    The ray starts at mu +/- e_cut and runs to +/- infinity. sigma = +1
    integrals are evaluated on the rotated contour eps = start +/- i y, where
    the phase decays as e^{-y t}; sigma = -1 follows by conjugation since the
    integrand is real on the real axis. Returns {(m, sigma): array} for
    m in (2, 3, 4), sigma in (0, 1).
    """
    start = res.mu + e_cut if upper else res.mu - e_cut
    sgn = 1.0 if upper else -1.0
    x, wx = np.polynomial.legendre.leggauss(_TAIL_NODES)
    x = 0.5 * (x + 1.0)
    wx = 0.5 * wx

    def jf(eps):
        j = res.gamma * res.width**2 / ((eps - res.mu) ** 2 + res.width**2)
        return j * _fermi_complex(eps, res, hole)

    out = {}
    # sigma = 0: smooth real-axis integral, one rational map of scale e_cut
    s0 = e_cut
    eps0 = start + sgn * s0 * x / (1 - x)
    jac0 = s0 * wx / (1 - x) ** 2
    r0 = jf(eps0) * jac0
    for m in (2, 3, 4):
        out[(m, 0)] = complex(np.sum(r0 * eps0 ** (-m)))
    # sigma = +1: vertical contour, per-time decay scale 1/(t + 4/e_cut)
    s = 1.0 / (times + 4.0 / e_cut)  # (n_t,)
    y = s[:, None] * (x / (1 - x))[None, :]  # (n_t, q)
    jac = s[:, None] * (wx / (1 - x) ** 2)[None, :]
    eps1 = start + 1j * y
    r1 = jf(eps1) * np.exp(-y * times[:, None]) * jac
    rot = 1j * np.exp(1j * start * times) if upper else -1j * np.exp(1j * start * times)
    for m in (2, 3, 4):
        out[(m, 1)] = rot * np.sum(r1 * eps1 ** (-m), axis=1)
    return out


def _tail_correction(pg: PropagatorGrid, alpha: str, p: ModelParams,
                     e_cut: float, hole: bool) -> np.ndarray:
    """Contribution to v (or vbar for ``hole``) from |eps - mu| > e_cut.

    Uses the two-term large-eps asymptotics of K(t, eps) obtained by
    integrating int_0^t u e^{i eps s} ds by parts twice:
        K = (u(t) e^{i eps t} - u(0)) / (i eps)
          + (u'(t) e^{i eps t} - u'(0)) / eps^2 + O(eps^-3),
    whose outer products against J f / (2 pi) integrate term by term into the
    ray moments above.
    """
    res = p.reservoir(alpha)
    col = SERIAL_DOT_INDEX[alpha]
    times = pg.grid.times
    a = pg.u[:, :, col]  # (n_t, 2)
    b = np.gradient(pg.u, pg.grid.dt, axis=0)[:, :, col]
    e = np.zeros(2)
    e[col] = 1.0
    eps_s = np.array([[p.eps11, p.eps12], [np.conj(p.eps12), p.eps22]])
    b0 = -1j * eps_s[:, col]

    def outer(xi, yj):
        return np.einsum("ti,tj->tij", np.broadcast_to(xi, a.shape),
                         np.broadcast_to(yj, a.shape).conj())

    c0 = outer(a, a) + np.einsum("i,j->ij", e, e)[None]
    cp = -outer(a, e)
    d0 = outer(a, b) + outer(e, b0[None]) - outer(b, a) - outer(b0[None], e)
    dp = outer(b, e) - outer(a, b0[None])
    g0 = outer(b, b) + outer(b0[None], b0[None])
    gp = -outer(b, b0[None])

    corr = np.zeros((len(times), 2, 2), dtype=complex)
    for upper in (True, False):
        mom = _ray_moments(res, upper, hole, times, e_cut)
        if all(abs(mom[(m, 0)]) < 1e-300 for m in (2, 3, 4)):
            continue  # zero-temperature ray with vanishing occupation
        i2p, i3p, i4p = mom[(2, 1)], mom[(3, 1)], mom[(4, 1)]
        corr += c0 * mom[(2, 0)] + cp * i2p[:, None, None] \
            + cp.conj().transpose(0, 2, 1) * i2p.conj()[:, None, None]
        m3 = d0 * mom[(3, 0)] + dp * i3p[:, None, None] \
            - dp.conj().transpose(0, 2, 1) * i3p.conj()[:, None, None]
        corr += -1j * m3
        corr += g0 * mom[(4, 0)] + gp * i4p[:, None, None] \
            + gp.conj().transpose(0, 2, 1) * i4p.conj()[:, None, None]
    return corr / (2 * np.pi)


def compute_noise_correlations(
    pg: PropagatorGrid, cfg: SpectralConfig, p: ModelParams
) -> NoiseCorrelations:
    """Both equal-time correlation matrices on the propagator grid.

    vbar is integrated independently (weight 1 - f), never derived from the
    anticommutator sum rule, so the sum rule stays a genuine test. Each
    integral is a Gauss-Legendre panel quadrature over |eps - mu| < c W plus
    an analytic asymptotic correction for the two rays beyond the cutoff.
    """
    n = pg.grid.n_steps
    v = np.zeros((n + 1, 2, 2), dtype=complex)
    vbar = np.zeros((n + 1, 2, 2), dtype=complex)
    for alpha in ("L", "R"):
        res = p.reservoir(alpha)
        if res.gamma == 0:
            continue
        eps, w = reservoir_nodes(alpha, p, cfg)
        _accumulate_reservoir(pg, alpha, p, eps, w, v, vbar)
        e_cut = _effective_cutoff(res, cfg) * res.width
        v += _tail_correction(pg, alpha, p, e_cut, hole=False)
        vbar += _tail_correction(pg, alpha, p, e_cut, hole=True)
    # enforce exact Hermiticity against quadrature rounding
    v = 0.5 * (v + v.conj().transpose(0, 2, 1))
    vbar = 0.5 * (vbar + vbar.conj().transpose(0, 2, 1))
    return NoiseCorrelations(grid=pg.grid, v=v, vbar=vbar)


def lesser_correlation(pg: PropagatorGrid, cfg: SpectralConfig, p: ModelParams) -> np.ndarray:
    """v(t) alone; see compute_noise_correlations."""
    return compute_noise_correlations(pg, cfg, p).v


def greater_correlation(pg: PropagatorGrid, cfg: SpectralConfig, p: ModelParams) -> np.ndarray:
    """vbar(t) alone; see compute_noise_correlations."""
    return compute_noise_correlations(pg, cfg, p).vbar


def check_quadrature_convergence(
    pg: PropagatorGrid, cfg: SpectralConfig, p: ModelParams, tol: float = 1e-6
) -> float:
    """Node-doubling error estimate for v; raises QuadratureError above tol."""
    coarse = compute_noise_correlations(pg, cfg, p)
    fine_cfg = SpectralConfig(
        nodes_per_reservoir=2 * cfg.nodes_per_reservoir,
        cutoff_multiplier=cfg.cutoff_multiplier,
        cutoff_cap=cfg.cutoff_cap,
    )
    fine = compute_noise_correlations(pg, fine_cfg, p)
    err = float(np.abs(fine.v - coarse.v).max())
    if err > tol:
        raise QuadratureError(
            f"energy quadrature not converged: node doubling changed v by {err:.3e} > {tol:g}"
        )
    return err


def sum_rule_residual(pg: PropagatorGrid, nc: NoiseCorrelations) -> float:
    """Max-entry residual of v + vbar = I - u u+ over the whole grid."""
    uu = np.einsum("tij,tkj->tik", pg.u, pg.u.conj())
    target = np.eye(2) - uu
    return float(np.abs(nc.v + nc.vbar - target).max())

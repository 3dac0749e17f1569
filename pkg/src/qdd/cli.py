"""Command-line entry point.

Subcommands: evolve (open-system time evolution), closed (isolated double
dot), sweep (two-parameter scan), oracle-check (cross-validation against the
discretized-bath reference). Exit codes: 0 success, 1 validation error,
2 numerical failure, 3 I/O error.
"""
from __future__ import annotations

import argparse
import dataclasses
import os
import sys

import numpy as np

from . import io as qio
from .closed import ClosedParams, closed_bloch_series, closed_coherence_series, revival_time
from .density import PhysicalityError, assemble_rho
from .model import ModelError
from .noise import QuadratureError, compute_noise_correlations, sum_rule_residual
from .observables import compute_observables
from .oracle import RecurrenceError, discretize_bath, exact_density_matrix, exact_greens
from .propagator import BACKENDS, StepSizeError, solve_retarded
from .sweep import run_sweep

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qdd",
        description="Exact non-Markovian dynamics of a serial double quantum dot",
    )
    sub = ap.add_subparsers(dest="mode", required=True)
    for mode in qio.MODES:
        sp = sub.add_parser(mode)
        sp.add_argument("--config", default=None, help="YAML run configuration")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--dt", type=float, default=None)
        sp.add_argument("--horizon", type=float, default=None)
        sp.add_argument("--quad-nodes", type=int, default=None)
        sp.add_argument("--backend", choices=BACKENDS, default=None)
        sp.add_argument("--dump-greens", action="store_true",
                        help="also write raw u/v/vbar series")
    return ap


def _overrides(args) -> dict:
    out = {"mode": args.mode}
    for key, val in (("dt", args.dt), ("horizon", args.horizon),
                     ("quad_nodes", args.quad_nodes), ("backend", args.backend)):
        if val is not None:
            out[key] = val
    return out


def _run_evolve(cfg: qio.RunConfig, out_dir: str, dump_greens: bool) -> int:
    pg = solve_retarded(cfg.params, cfg.grid, backend=cfg.backend)
    nc = compute_noise_correlations(pg, cfg.spectral, cfg.params)
    dm = assemble_rho(pg, nc, cfg.params)
    obs = compute_observables(dm, cfg.params)
    qio.write_evolve_csv(os.path.join(out_dir, "evolve.csv"), obs, dm.rho)
    qio.write_evolve_summary(os.path.join(out_dir, "evolve_summary.json"), obs)
    if dump_greens:
        qio.write_greens_csv(os.path.join(out_dir, "greens.csv"),
                             cfg.grid, pg.u, nc.v, nc.vbar)
    print(f"evolve: wrote {out_dir}/evolve.csv "
          f"(sum rule residual {sum_rule_residual(pg, nc):.3e})")
    return EXIT_OK


def _run_closed(cfg: qio.RunConfig, out_dir: str) -> int:
    cp = ClosedParams(eps11=cfg.params.eps11, eps22=cfg.params.eps22,
                      eps12=cfg.params.eps12)
    c = closed_coherence_series(cp, cfg.grid)
    bloch = closed_bloch_series(cp, cfg.grid)
    qio.write_closed_csv(os.path.join(out_dir, "closed.csv"),
                         cfg.grid.times, c, bloch)
    print(f"closed: wrote {out_dir}/closed.csv "
          f"(revival time {revival_time(cp):.4f}, peak coherence {c.max():.4f})")
    return EXIT_OK


def _run_sweep(cfg: qio.RunConfig, out_dir: str) -> int:
    result = run_sweep(cfg.sweep)
    path = os.path.join(out_dir, "sweep.csv")
    qio.write_sweep_csv(path, result)
    failed = [r for r in result.rows if r["error"]]
    print(f"sweep: wrote {path} ({len(result.rows)} cells, {len(failed)} failed)")
    for r in failed:
        print(f"  cell ({r['param1']}, {r['param2']}): {r['error']}", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_NUMERICAL


def _run_oracle_check(cfg: qio.RunConfig, out_dir: str) -> int:
    p, grid = cfg.params, cfg.grid
    pg = solve_retarded(p, grid, backend=cfg.backend)
    nc = compute_noise_correlations(pg, cfg.spectral, p)
    dm = assemble_rho(pg, nc, p)

    bath_l = discretize_bath("L", cfg.oracle_modes, p, cutoff=cfg.oracle_cutoff)
    bath_r = discretize_bath("R", cfg.oracle_modes, p, cutoff=cfg.oracle_cutoff)
    eg = exact_greens(bath_l, bath_r, p, grid, stride=cfg.oracle_stride)
    rho_exact = exact_density_matrix(eg).rho

    s = slice(0, grid.n_steps + 1, cfg.oracle_stride)
    d_u = np.max(np.abs(pg.u[s] - eg.u))
    d_v = np.max(np.abs(nc.v[s] - eg.v))
    d_rho = np.max(np.abs(dm.rho[s] - rho_exact))
    tol = 5e-3
    lines = [("u", d_u), ("v", d_v), ("rho", d_rho)]
    ok = True
    for name, d in lines:
        status = "PASS" if d < tol else "FAIL"
        ok &= d < tol
        print(f"oracle-check {name}: max-entry discrepancy {d:.3e} "
              f"(tol {tol:g}) {status}")
    return EXIT_OK if ok else EXIT_NUMERICAL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = qio.load_config(args.config, _overrides(args))
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (qio.ConfigError, ModelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        os.makedirs(args.out, exist_ok=True)
        if cfg.mode == "evolve":
            return _run_evolve(cfg, args.out, args.dump_greens)
        if cfg.mode == "closed":
            return _run_closed(cfg, args.out)
        if cfg.mode == "sweep":
            return _run_sweep(cfg, args.out)
        return _run_oracle_check(cfg, args.out)
    except (StepSizeError, QuadratureError, PhysicalityError,
            RecurrenceError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Sweep the two reservoir widths and map the steady-state landscape.

Writes sweep.csv (one row per (W_L, W_R) cell: peak and steady coherence,
steady current magnitude, steady mutual information) plus a JSON sidecar
with the sweep specification. Expect minutes of runtime for dense grids.
"""
import argparse
import os
import time

import numpy as np

import qdd
from qdd import io as qio


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/width_sweep", help="output directory")
    ap.add_argument("--w-l", type=float, nargs="+", default=[1.0, 3.0, 4.0, 30.0])
    ap.add_argument("--w-r-min", type=float, default=0.3)
    ap.add_argument("--w-r-max", type=float, default=30.0)
    ap.add_argument("--w-r-points", type=int, default=25)
    ap.add_argument("--dt", type=float, default=2e-3)
    ap.add_argument("--horizon", type=float, default=20.0)
    args = ap.parse_args()

    spec = qdd.SweepSpec(
        param1="w_L",
        values1=tuple(args.w_l),
        param2="w_R",
        values2=tuple(np.geomspace(args.w_r_min, args.w_r_max, args.w_r_points)),
        grid=qdd.TimeGrid(dt=args.dt, n_steps=int(round(args.horizon / args.dt))),
        spectral=qdd.SpectralConfig(nodes_per_reservoir=600, cutoff_multiplier=32.0),
    )
    t0 = time.time()
    result = qdd.run_sweep(spec)
    failed = sum(1 for r in result.rows if r["error"])
    print(f"{len(result.rows)} cells in {time.time() - t0:.0f} s ({failed} failed)")

    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "sweep.csv")
    qio.write_sweep_csv(path, result)
    print(f"wrote {path}")


if __name__ == "__main__":
    main()

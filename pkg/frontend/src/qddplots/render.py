"""Figure rendering from qdd CSV files.

Read-only over its inputs: no physics is recomputed here. Output is
deterministic — fixed style, fixed fonts, no timestamps — so repeated runs
on the same CSV produce byte-identical images.
"""
from __future__ import annotations

import csv

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from mpl_toolkits.mplot3d import Axes3D  # noqa: F401,E402

from .spec import PlotSpec, PlotSpecError

#: style pinned for reproducibility across environments
_STYLE = {
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.2,
    "svg.hashsalt": "qddplots",
}

_TIMESERIES_DEFAULT = ("rho11", "rho22", "rho33", "rho44")
_SURFACE_DEFAULT = ("peak_c_l1",)
_BLOCH_COLUMNS = ("bloch_x", "bloch_y", "bloch_z", "c_l1")

_LABELS = {
    "rho11": r"$\rho_{11}$", "rho22": r"$\rho_{22}$", "rho33": r"$\rho_{33}$",
    "rho44": r"$\rho_{44}$", "c_l1": r"$C_{\ell_1}$", "c_re": r"$C_{RE}$",
    "purity": "purity", "entropy": r"$S(\rho)$", "mi": r"$I(1{:}2)$",
    "n1": r"$\langle N_1\rangle$", "n2": r"$\langle N_2\rangle$",
    "i_left": r"$I_L$", "i_right": r"$I_R$",
    "peak_c_l1": r"peak $C_{\ell_1}$", "steady_c_l1": r"steady $C_{\ell_1}$",
    "steady_current_mag": r"steady $|I|$", "steady_mi": r"steady $I(1{:}2)$",
}


def read_table(path: str) -> dict:
    """CSV with a header row -> dict of float arrays; empty body is an error."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise PlotSpecError(f"{path}: empty file") from None
        rows = list(reader)
    if not rows:
        raise PlotSpecError(f"{path}: no data rows")
    data = np.array(rows, dtype=object)
    out = {}
    for j, name in enumerate(header):
        col = data[:, j]
        try:
            out[name] = col.astype(float)
        except ValueError:
            out[name] = col  # non-numeric column (e.g. error strings)
    return out


def _require(table: dict, columns, path: str):
    missing = [c for c in columns if c not in table]
    if missing:
        raise PlotSpecError(f"{path}: missing columns {missing}")


def _label(name: str) -> str:
    return _LABELS.get(name, name)


def _render_timeseries(spec: PlotSpec, table: dict):
    cols = spec.columns or _TIMESERIES_DEFAULT
    _require(table, ("t", *cols), spec.csv)
    n = len(cols)
    ncols = 2 if n > 1 else 1
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(3.2 * ncols, 2.4 * nrows),
                             sharex=True, squeeze=False)
    t = table["t"]
    for k, name in enumerate(cols):
        ax = axes[k // ncols][k % ncols]
        ax.plot(t, table[name], color="C0")
        ax.set_ylabel(_label(name))
        if spec.ylim:
            ax.set_ylim(*spec.ylim)
    for k in range(n, nrows * ncols):
        axes[k // ncols][k % ncols].set_visible(False)
    for ax in axes[-1]:
        ax.set_xlabel(spec.xlabel or r"$\Gamma t$")
        if spec.xlim:
            ax.set_xlim(*spec.xlim)
    return fig


def _render_bloch(spec: PlotSpec, table: dict):
    _require(table, _BLOCH_COLUMNS, spec.csv)
    fig = plt.figure(figsize=(4.8, 4.8))
    ax = fig.add_subplot(projection="3d")
    # unit sphere wireframe and equator
    ph = np.linspace(0, 2 * np.pi, 60)
    th = np.linspace(0, np.pi, 30)
    ph_g, th_g = np.meshgrid(ph, th)
    ax.plot_wireframe(np.cos(ph_g) * np.sin(th_g), np.sin(ph_g) * np.sin(th_g),
                      np.cos(th_g), color="0.85", linewidth=0.3)
    ax.plot(np.cos(ph), np.sin(ph), 0 * ph, color="0.4", linewidth=0.8)
    x, y, z = table["bloch_x"], table["bloch_y"], table["bloch_z"]
    keep = ~(np.isnan(x) | np.isnan(y) | np.isnan(z))
    sc = ax.scatter(x[keep], y[keep], z[keep], c=table["c_l1"][keep],
                    cmap="viridis", s=2)
    fig.colorbar(sc, ax=ax, shrink=0.6, label=_label("c_l1"))
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_box_aspect((1, 1, 1))
    return fig


def _sweep_grid(spec: PlotSpec, table: dict, zname: str):
    _require(table, ("param1", "param2", zname), spec.csv)
    p1 = np.unique(table["param1"])
    p2 = np.unique(table["param2"])
    z = np.full((len(p1), len(p2)), np.nan)
    i = np.searchsorted(p1, table["param1"])
    j = np.searchsorted(p2, table["param2"])
    z[i, j] = table[zname]
    return p1, p2, z


def _render_surface(spec: PlotSpec, table: dict):
    zname = (spec.columns or _SURFACE_DEFAULT)[0]
    p1, p2, z = _sweep_grid(spec, table, zname)
    fig = plt.figure(figsize=(5.2, 4.2))
    ax = fig.add_subplot(projection="3d")
    a1 = np.log10(p1) if spec.logx else p1
    a2 = np.log10(p2) if spec.logx else p2
    g2, g1 = np.meshgrid(a2, a1)
    ax.plot_surface(g1, g2, z, cmap="viridis", edgecolor="k", linewidth=0.2)
    prefix = r"$\log_{10}$ " if spec.logx else ""
    ax.set_xlabel(spec.xlabel or prefix + "param1")
    ax.set_ylabel(spec.ylabel or prefix + "param2")
    ax.set_zlabel(_label(zname))
    return fig


def _render_lines(spec: PlotSpec, table: dict):
    zname = (spec.columns or _SURFACE_DEFAULT)[0]
    p1, p2, z = _sweep_grid(spec, table, zname)
    fig, ax = plt.subplots(figsize=(4.6, 3.4))
    for k, v1 in enumerate(p1):
        ax.plot(p2, z[k], marker="o", markersize=2.5, label=f"{v1:g}")
    if spec.logx:
        ax.set_xscale("log")
    ax.set_xlabel(spec.xlabel or "param2")
    ax.set_ylabel(spec.ylabel or _label(zname))
    ax.legend(title="param1", fontsize=8)
    return fig


_RENDERERS = {
    "timeseries": _render_timeseries,
    "bloch": _render_bloch,
    "surface": _render_surface,
    "lines": _render_lines,
}


def render(spec: PlotSpec) -> str:
    """Draw the figure described by ``spec``; returns the output path."""
    table = read_table(spec.csv)
    with plt.style.context(_STYLE):
        fig = _RENDERERS[spec.kind](spec, table)
        if spec.title:
            fig.suptitle(spec.title)
        fig.tight_layout()
        fig.savefig(spec.out, metadata={"Software": "qddplots"})
        plt.close(fig)
    return spec.out

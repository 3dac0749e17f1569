"""Plot specifications: what to draw, from which CSV, to which file."""
from __future__ import annotations

from dataclasses import dataclass, field

import yaml

KINDS = ("timeseries", "bloch", "surface", "lines")


class PlotSpecError(ValueError):
    """Invalid or inconsistent plot specification."""


@dataclass(frozen=True)
class PlotSpec:
    """One figure: a kind, an input CSV, a column selection, an output path.

    ``columns`` selects the y series (timeseries) or the z scalar (surface /
    lines); the bloch kind has a fixed column set. Empty ``columns`` picks a
    kind-specific default.
    """

    kind: str
    csv: str
    out: str
    columns: tuple = ()
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    xlim: tuple | None = None
    ylim: tuple | None = None
    logx: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PlotSpecError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not self.csv or not self.out:
            raise PlotSpecError("both csv and out paths are required")
        object.__setattr__(self, "columns", tuple(self.columns))


def load_spec(path: str) -> PlotSpec:
    """Read a spec from a small YAML mapping."""
    with open(path) as fh:
        doc = yaml.safe_load(fh) or {}
    if not isinstance(doc, dict):
        raise PlotSpecError("spec file must contain a mapping")
    known = {
        "kind", "csv", "out", "columns", "title", "xlabel", "ylabel",
        "xlim", "ylim", "logx",
    }
    unknown = set(doc) - known
    if unknown:
        raise PlotSpecError(f"unknown spec keys: {sorted(unknown)}")
    for key in ("xlim", "ylim"):
        if doc.get(key) is not None:
            doc[key] = tuple(float(v) for v in doc[key])
    try:
        return PlotSpec(**doc)
    except TypeError as exc:
        raise PlotSpecError(str(exc)) from None

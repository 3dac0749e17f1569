"""Publication-style figures from qdd CSV outputs: time-series panels,
Bloch-sphere trajectories, and sweep surfaces/line families. Rendering is
read-only over the CSV schema and byte-deterministic."""
from .render import read_table, render
from .spec import KINDS, PlotSpec, PlotSpecError, load_spec

__version__ = "0.1.0"

"""Post-processing plots for Active Flux solver output files."""

from .snapshots import Snapshot, read_snapshot
from .plots import PlotJob, plot

__all__ = ["Snapshot", "read_snapshot", "PlotJob", "plot"]

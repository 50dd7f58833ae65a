"""Panel plots with standard-deviation bands from sweep summary CSVs."""

from .render import (METRICS, PanelSpec, PlotTable, build_plot_table,
                     read_summary_csv, render_sweep_figure, write_sidecar)

__version__ = "0.1.0"

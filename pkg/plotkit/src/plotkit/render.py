"""Render sweep-summary CSVs as panel figures with one-std bands.

Input is the summary table produced by the simulator's `analyze` command:
group columns (gamma, delta, c0, mu), run counters, and <metric>_mean /
<metric>_std pairs. Each figure fixes one metric; panels split on the panel
columns, curves on the curve columns, and the x axis walks the remaining
group column (c0 by default). Every rendered figure is accompanied by a
sidecar CSV holding exactly the plotted points and band half-widths, copied
unmodified from the summary table, so plots are reproducible data first and
pixels second.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, TextIO

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

METRICS = ("n_major", "n_minor", "entropy", "w_fraction", "log10_T")

AXIS_LABELS = {
    "n_major": "major clusters",
    "n_minor": "minor clusters",
    "entropy": "entropy",
    "w_fraction": "weighted edge fraction",
    "log10_T": "log10 convergence time",
}


@dataclass(frozen=True)
class PanelSpec:
    """What to draw: the metric, the panel split, the curve split, the x axis."""

    metric: str
    panel_keys: tuple[str, ...] = ("gamma",)
    curve_keys: tuple[str, ...] = ("delta",)
    x_key: str = "c0"
    x_label: str = "initial confidence bound"
    y_label: Optional[str] = None
    max_columns: int = 3

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")

    def resolved_y_label(self) -> str:
        return self.y_label if self.y_label is not None else AXIS_LABELS[self.metric]


@dataclass
class PlotTable:
    """The exact numbers behind one figure, one row per plotted point."""

    spec: PanelSpec
    rows: list[dict] = field(default_factory=list)

    def panels(self) -> list[tuple]:
        return sorted({tuple(r[k] for k in self.spec.panel_keys) for r in self.rows})

    def curves(self, panel: tuple) -> list[tuple]:
        return sorted({tuple(r[k] for k in self.spec.curve_keys)
                       for r in self.rows
                       if tuple(r[k] for k in self.spec.panel_keys) == panel})

    def points(self, panel: tuple, curve: tuple) -> list[dict]:
        rows = [r for r in self.rows
                if tuple(r[k] for k in self.spec.panel_keys) == panel
                and tuple(r[k] for k in self.spec.curve_keys) == curve]
        return sorted(rows, key=lambda r: r["x"])


def _parse_cell(text: str):
    if text == "":
        return None
    return float(text)


def read_summary_csv(source: TextIO) -> tuple[list[str], list[dict]]:
    """Parse an analyze-style summary CSV into (header, rows of floats/None)."""
    header = source.readline().rstrip("\n").split(",")
    rows = []
    for line in source:
        line = line.rstrip("\n")
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise ValueError(f"row has {len(cells)} cells, header has {len(header)}")
        rows.append({k: _parse_cell(v) for k, v in zip(header, cells)})
    return header, rows


def build_plot_table(header: Sequence[str], rows: Sequence[dict],
                     spec: PanelSpec) -> PlotTable:
    """Select the plotted columns; groups without usable runs are dropped."""
    mean_col = f"{spec.metric}_mean"
    std_col = f"{spec.metric}_std"
    needed = list(spec.panel_keys) + list(spec.curve_keys) + [spec.x_key, mean_col, std_col]
    for col in needed:
        if col not in header:
            raise ValueError(f"summary CSV is missing column {col!r}")
    table = PlotTable(spec=spec)
    for row in rows:
        if row[mean_col] is None:
            continue
        record = {k: row[k] for k in spec.panel_keys}
        record.update({k: row[k] for k in spec.curve_keys})
        record["x"] = row[spec.x_key]
        record["mean"] = row[mean_col]
        record["std"] = row[std_col]
        table.rows.append(record)
    return table


def _fmt(value) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def _label(keys: Sequence[str], values: tuple) -> str:
    return ", ".join(f"{k}={_fmt(v)}" for k, v in zip(keys, values))


def write_sidecar(table: PlotTable, sink: TextIO) -> None:
    """The plotted data table: group columns, x, mean, std; repr formatting."""
    spec = table.spec
    cols = list(spec.panel_keys) + list(spec.curve_keys) + ["x", "mean", "std"]
    sink.write(",".join(cols) + "\n")
    for panel in table.panels():
        for curve in table.curves(panel):
            for point in table.points(panel, curve):
                sink.write(",".join(_fmt(point[c]) for c in cols) + "\n")


def render_figure(table: PlotTable, figure_path: Path) -> None:
    spec = table.spec
    panels = table.panels()
    ncols = min(len(panels), spec.max_columns)
    nrows = (len(panels) + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, squeeze=False,
                             figsize=(4.2 * ncols, 3.2 * nrows), sharex=True)
    for idx, panel in enumerate(panels):
        ax = axes[idx // ncols][idx % ncols]
        for curve in table.curves(panel):
            pts = table.points(panel, curve)
            xs = [p["x"] for p in pts]
            means = [p["mean"] for p in pts]
            stds = [p["std"] for p in pts]
            line, = ax.plot(xs, means, marker="o", markersize=3,
                            label=_label(spec.curve_keys, curve))
            lo = [m - s for m, s in zip(means, stds)]
            hi = [m + s for m, s in zip(means, stds)]
            ax.fill_between(xs, lo, hi, alpha=0.2, color=line.get_color())
        ax.set_title(_label(spec.panel_keys, panel), fontsize=10)
        ax.set_xlabel(spec.x_label)
        ax.set_ylabel(spec.resolved_y_label())
    for idx in range(len(panels), nrows * ncols):
        axes[idx // ncols][idx % ncols].set_axis_off()
    axes[0][0].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(figure_path, dpi=150)
    plt.close(fig)


def render_sweep_figure(summary_csv: str | Path, spec: PanelSpec,
                        out_prefix: str | Path) -> tuple[Path, Path, PlotTable]:
    """Render one metric: <prefix>_<metric>.png plus <prefix>_<metric>_data.csv."""
    with open(summary_csv, "r", encoding="utf-8") as fh:
        header, rows = read_summary_csv(fh)
    table = build_plot_table(header, rows, spec)
    if not table.rows:
        raise ValueError(f"no plottable rows for metric {spec.metric!r}")
    out_prefix = Path(out_prefix)
    out_prefix.parent.mkdir(parents=True, exist_ok=True)
    figure_path = out_prefix.parent / f"{out_prefix.name}_{spec.metric}.png"
    sidecar_path = out_prefix.parent / f"{out_prefix.name}_{spec.metric}_data.csv"
    with open(sidecar_path, "w", encoding="utf-8") as fh:
        write_sidecar(table, fh)
    render_figure(table, figure_path)
    return figure_path, sidecar_path, table

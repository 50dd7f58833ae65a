"""Batch figure generation from a sweep summary CSV."""

from __future__ import annotations

import argparse
import sys

from .render import METRICS, PanelSpec, render_sweep_figure


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bcm-plot",
        description="Panel plots with one-standard-deviation bands from a "
                    "sweep summary CSV")
    parser.add_argument("summary", help="summary CSV produced by `abcm analyze`")
    parser.add_argument("--metric", default="all",
                        help=f"one of {', '.join(METRICS)}, or 'all'")
    parser.add_argument("--panel", default="gamma",
                        help="comma-separated panel columns (default: gamma)")
    parser.add_argument("--curve", default="delta",
                        help="comma-separated curve columns (default: delta)")
    parser.add_argument("--x", default="c0", help="x-axis column (default: c0)")
    parser.add_argument("--out", default="figures/sweep",
                        help="output path prefix (default: figures/sweep)")
    args = parser.parse_args(argv)

    metrics = METRICS if args.metric == "all" else (args.metric,)
    panel_keys = tuple(k.strip() for k in args.panel.split(",") if k.strip())
    curve_keys = tuple(k.strip() for k in args.curve.split(",") if k.strip())
    try:
        for metric in metrics:
            spec = PanelSpec(metric=metric, panel_keys=panel_keys,
                             curve_keys=curve_keys, x_key=args.x)
            figure, sidecar, table = render_sweep_figure(args.summary, spec, args.out)
            print(f"{metric}: {figure} ({len(table.panels())} panel(s)), data {sidecar}")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Rendering of benchmark reports to figure files.

The harness itself only emits delimited data; this module turns a list of
benchmark records into the matching matplotlib figures, written next to
the CSV.  Matplotlib is imported lazily with the Agg backend so rendering
works headless and importing the package stays cheap.
"""

from __future__ import annotations

from pathlib import Path

from .bench import PLOT_KINDS, plot_series

_AXIS_LABELS = {
    "time_vs_n_normalized": ("parties n", "mean time per party [ns]"),
    "time_vs_counter": ("counter", "mean time [ns]"),
    "counter_vs_n": ("parties n", "mean counter / n"),
}


def render_figures(records, out_dir, formats: tuple[str, ...] = ("png",)):
    """Render one figure per applicable plot kind; returns written paths."""
    import matplotlib
    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for kind in PLOT_KINDS:
        series = [(label, points) for label, points in plot_series(records, kind)
                  if points]
        if not series:
            continue
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        for label, points in series:
            xs = [x for x, _ in points]
            ys = [y for _, y in points]
            if kind == "time_vs_counter":
                ax.plot(xs, ys, "o", alpha=0.6, label=label)
            else:
                ax.plot(xs, ys, marker="o", label=label)
        if kind != "time_vs_counter" and len({x for _, pts in series
                                              for x, _ in pts}) > 2:
            ax.set_xscale("log")
        x_label, y_label = _AXIS_LABELS[kind]
        ax.set_xlabel(x_label)
        ax.set_ylabel(y_label)
        ax.set_title(kind.replace("_", " "))
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize="small")
        fig.tight_layout()
        for fmt in formats:
            path = out_dir / f"{kind}.{fmt}"
            fig.savefig(path, dpi=150)
            written.append(path)
        plt.close(fig)
    return written

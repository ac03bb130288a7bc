"""Render an experiment report to a figure file next to its CSV/JSON.

One figure per report: the first column supplies the x axis, every other
numeric column becomes a line. Matplotlib is imported lazily so the
library works without a display and without the plotting dependency on
code paths that never render.
"""

from __future__ import annotations

from .errors import PreconditionError
from .report import ExperimentReport


def _numeric(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def render_report(report: ExperimentReport, path: str, logx: bool | None = None) -> str:
    """Write a line plot of the report's numeric columns to `path`."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if not report.rows:
        raise PreconditionError(f"report {report.name!r} has no rows to plot")
    columns = report.columns
    x_col = columns[0]
    xs = [row[x_col] for row in report.rows]
    if not all(_numeric(x) for x in xs):
        x_col, xs = "row", list(range(len(report.rows)))

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    plotted = 0
    for col in columns:
        if col == x_col:
            continue
        ys = [row[col] for row in report.rows]
        pairs = [(x, y) for x, y in zip(xs, ys) if _numeric(y)]
        if not pairs:
            continue
        ax.plot([p[0] for p in pairs], [p[1] for p in pairs], marker="o", label=col)
        plotted += 1
    if plotted == 0:
        plt.close(fig)
        raise PreconditionError(f"report {report.name!r} has no numeric columns to plot")

    positive = [x for x in xs if _numeric(x) and x > 0]
    if logx is None:
        logx = len(positive) == len(xs) and len(xs) > 1 and max(positive) / min(positive) > 30
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel(x_col)
    ax.set_title(report.name)
    ax.grid(True, alpha=0.4)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path

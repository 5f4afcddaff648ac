"""SVG plots rebuilt from the CSV files written by the CLI (never from in-memory results)."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

LOG_AXES = ("R", "t")


def read_csv(path) -> tuple[list[str], list[str], dict[str, np.ndarray]]:
    """``(index_columns, columns, data)``; non-numeric columns stay as string arrays."""
    index_cols: list[str] = []
    lines = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("index_columns:"):
                index_cols = [c for c in body.split(":", 1)[1].strip().split(",") if c]
            continue
        lines.append(line)
    rows = list(csv.reader(lines))
    columns, body = rows[0], rows[1:]
    data = {}
    for j, col in enumerate(columns):
        raw = [r[j] for r in body]
        try:
            data[col] = np.array([float(v) for v in raw])
        except ValueError:
            data[col] = np.array(raw)
    return index_cols, columns, data


def plot_csv(path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    index_cols, columns, data = read_csv(path)
    values = [c for c in columns if c not in index_cols and data[c].dtype.kind == "f"]
    x_col = next((c for c in ("R", "t", "l", "h") if c in columns), None)
    fig, axes = plt.subplots(1, max(1, len(values)), figsize=(4.2 * max(1, len(values)), 3.4), squeeze=False)
    axes = axes[0]
    params = [c for c in index_cols if c != "point"]

    if x_col is not None and x_col in values:
        # curves, one per point
        ys = [c for c in values if c != x_col]
        fig.clf()
        axes = fig.subplots(1, max(1, len(ys)), squeeze=False)[0]
        groups = data["point"] if "point" in data else np.zeros(len(data[x_col]))
        for ax, col in zip(axes, ys):
            for g in np.unique(groups):
                sel = groups == g
                x, y = data[x_col][sel], data[col][sel]
                label = ", ".join(f"{p}={data[p][sel][0]:g}" for p in params)
                if x_col in LOG_AXES and np.all(x > 0):
                    ax.loglog(x, np.abs(y), lw=1, label=label or None)
                else:
                    ax.plot(x, y, lw=1, label=label or None)
            ax.set_xlabel(x_col)
            ax.set_ylabel(col)
        if params:
            axes[0].legend(fontsize=6)
    elif len(params) == 2:
        xs, ys = np.unique(data[params[0]]), np.unique(data[params[1]])
        for ax, col in zip(axes, values):
            grid = np.full((len(xs), len(ys)), np.nan)
            ix = np.searchsorted(xs, data[params[0]])
            iy = np.searchsorted(ys, data[params[1]])
            grid[ix, iy] = data[col]
            mesh = ax.pcolormesh(xs, ys, grid.T, shading="nearest")
            fig.colorbar(mesh, ax=ax)
            ax.set_xlabel(params[0])
            ax.set_ylabel(params[1])
            ax.set_title(col)
    else:
        x = data[params[0]] if params else np.arange(len(data[columns[0]]))
        for ax, col in zip(axes, values):
            ax.plot(x, data[col], "o-", ms=3)
            ax.set_xlabel(params[0] if params else "row")
            ax.set_ylabel(col)
    fig.tight_layout()
    out = path.with_suffix(".svg")
    # fixed metadata keeps repeated plots identical
    fig.savefig(out, format="svg", metadata={"Date": None})
    plt.close(fig)
    return out

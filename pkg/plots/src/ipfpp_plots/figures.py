"""Render figures from the simulator's CSV/JSON outputs.

Consumer-only layer: it reads the grid/slice CSV and fit/summary JSON
schemas emitted by the `ipfpp` CLI and never invokes the simulator.
The only numeric work done here is evaluating the fitted model
1 - |x|^alpha. All render parameters (figure size, dpi, font, colormap)
are pinned so a fixed toolchain reproduces output files byte for byte.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class SchemaError(ValueError):
    """An input file does not match the documented simulator schema."""


GRID_COLUMNS = ("x", "y", "count", "n", "proportion")
SLICE_COLUMNS = ("x_scaled", "proportion")
FIT_KEYS = ("alpha", "r")

FIGURE_KINDS = ("heatmap", "slices", "regression")

# pinned render parameters; byte reproducibility depends on these plus
# the matplotlib version, never on ambient rc configuration
_RC = {
    "figure.figsize": (6.4, 4.8),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.titlesize": 11,
    "legend.fontsize": 9,
    "svg.hashsalt": "ipfpp",
}


@dataclass
class FigureSpec:
    kind: str
    out_path: str
    grid_path: str = None
    slice_paths: tuple = ()
    slice_labels: tuple = ()
    fit_path: str = None
    summary_path: str = None
    level: float = 0.1

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"kind must be one of {FIGURE_KINDS}")
        if self.kind == "heatmap" and not self.grid_path:
            raise ValueError("heatmap kind requires a grid CSV")
        if self.kind in ("slices", "regression") and not self.slice_paths:
            raise ValueError(f"{self.kind} kind requires a slice CSV")
        if self.kind == "regression" and not self.fit_path:
            raise ValueError("regression kind requires a fit JSON")


def _check_header(path, header, expected):
    got = tuple(h.strip() for h in header)
    if got != expected:
        for g, e in zip(got, expected):
            if g != e:
                raise SchemaError(f"{path}: expected column '{e}', got '{g}'")
        raise SchemaError(f"{path}: expected columns {expected}, got {got}")


def read_grid(path):
    """Grid CSV rows as (x, y, proportion) arrays plus the trial count n."""
    xs, ys, ps = [], [], []
    n = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        _check_header(path, header, GRID_COLUMNS)
        for row in reader:
            if len(row) != len(GRID_COLUMNS):
                raise SchemaError(f"{path}: row has {len(row)} fields, "
                                  f"expected {len(GRID_COLUMNS)}")
            xs.append(int(row[0]))
            ys.append(int(row[1]))
            n = int(row[3])
            ps.append(float(row[4]))
    if n is None:
        raise SchemaError(f"{path}: no data rows")
    return np.array(xs), np.array(ys), np.array(ps), n


def read_slice(path):
    """Slice CSV as (x_scaled, proportion) arrays."""
    xs, ps = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        _check_header(path, header, SLICE_COLUMNS)
        for row in reader:
            if len(row) != 2:
                raise SchemaError(f"{path}: row has {len(row)} fields, "
                                  "expected 2")
            xs.append(float(row[0]))
            ps.append(float(row[1]))
    return np.array(xs), np.array(ps)


def read_fit(path):
    with open(path) as fh:
        fit = json.load(fh)
    for key in FIT_KEYS:
        if key not in fit:
            raise SchemaError(f"{path}: missing key '{key}'")
    return fit


def read_summary(path):
    with open(path) as fh:
        return json.load(fh)


def model(x, alpha):
    """The fitted profile 1 - |x|^alpha."""
    return 1.0 - np.abs(x) ** alpha


def _grid_image(xs, ys, ps):
    """Dense proportion array over the bounding box, NaN outside the region."""
    x0, x1 = xs.min(), xs.max()
    y0, y1 = ys.min(), ys.max()
    img = np.full((y1 - y0 + 1, x1 - x0 + 1), np.nan)
    img[ys - y0, xs - x0] = ps
    extent = (x0 - 0.5, x1 + 0.5, y0 - 0.5, y1 + 0.5)
    return img, extent, (x0, x1, y0, y1)


def _render_heatmap(spec, ax, fig):
    xs, ys, ps, n = read_grid(spec.grid_path)
    img, extent, (x0, x1, y0, y1) = _grid_image(xs, ys, ps)
    im = ax.imshow(img, origin="lower", extent=extent, cmap="viridis",
                   vmin=0.0, vmax=1.0, interpolation="nearest")
    fig.colorbar(im, ax=ax, label="P")
    gx = np.arange(x0, x1 + 1)
    gy = np.arange(y0, y1 + 1)
    cs = ax.contour(gx, gy, np.nan_to_num(img, nan=0.0),
                    levels=[spec.level], colors="red", linewidths=1.2)
    handles = [cs.legend_elements()[0][0],
               plt.Line2D([], [], linestyle="none")]
    labels = [f"P = {spec.level:g}", f"n = {n}"]
    if spec.summary_path:
        summary = read_summary(spec.summary_path)
        if "K" in summary:
            handles.append(plt.Line2D([], [], linestyle="none"))
            labels.append(f"K = {summary['K']:.6g}")
    ax.legend(handles, labels, loc="upper right", framealpha=0.9)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title("Proportion of trials reaching (x, y) before the boundary")


def _slice_label(path, idx, labels):
    if idx < len(labels):
        return labels[idx]
    stem = path.rsplit("/", 1)[-1]
    return stem.rsplit(".", 1)[0]


def _render_slices(spec, ax, fig):
    for i, path in enumerate(spec.slice_paths):
        xs, ps = read_slice(path)
        ax.plot(xs, ps, lw=1.0, marker=".", markersize=2.5,
                label=_slice_label(path, i, spec.slice_labels))
    ax.set_xlabel("x / R")
    ax.set_ylabel("P")
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="upper right")
    ax.set_title("y = 0 slice of the reach proportion")


def _render_regression(spec, ax, fig):
    fit = read_fit(spec.fit_path)
    xs, ps = read_slice(spec.slice_paths[0])
    ax.plot(xs, ps, ".", markersize=3.5, color="tab:blue", label="data")
    dense = np.linspace(-1.0, 1.0, 401)
    ax.plot(dense, model(dense, fit["alpha"]), "-", color="black", lw=1.2,
            label=rf"$1-|x|^\alpha$, $\alpha$ = {fit['alpha']:.4f}, "
                  rf"r = {fit['r']:.4f}")
    ax.set_xlabel("x / R")
    ax.set_ylabel("P")
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="lower center")
    ax.set_title("Slice with fitted power-law profile")


_RENDERERS = {
    "heatmap": _render_heatmap,
    "slices": _render_slices,
    "regression": _render_regression,
}


def render(spec):
    """Render spec.kind to spec.out_path; returns the output path."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        try:
            _RENDERERS[spec.kind](spec, ax, fig)
            fig.savefig(spec.out_path, metadata={"Software": None})
        finally:
            plt.close(fig)
    return spec.out_path

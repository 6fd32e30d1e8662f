"""Static SVG rendering of flow regions in the r-alpha plane."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .region import FlowRegion, FrontierVertex, NamedRegion  # noqa: E402

STYLE = {
    "font.family": "serif",
    "font.size": 8,
    "axes.labelsize": 10,
    "legend.fontsize": 7,
    "lines.linewidth": 1.2,
    "svg.hashsalt": "beflow",  # stable element ids
    "svg.fonttype": "none",
}
OVERLAY_COLORS = ["#2b8cbe", "#d95f0e", "#31a354", "#756bb1"]


def _frontier_xy(region: FlowRegion, r_hi: float):
    xs = [float(v.r) for v in region.vertices]
    ys = [float(v.alpha) for v in region.vertices]
    # the last vertex continues horizontally to the window edge
    if xs[-1] < r_hi:
        xs.append(r_hi)
        ys.append(ys[-1])
    return xs, ys


def plot_region(
    region: FlowRegion,
    path: str | Path,
    overlays: Sequence[NamedRegion] = (),
    title: str | None = None,
) -> Path:
    """Write an SVG of the window, the shaded region and its frontier, plus
    named-region overlays (segments for L/M, outlines for A and urd)."""
    r_lo, r_hi, a_lo, a_hi = (float(x) for x in region.window)
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.2, 3.0))
        xs, ys = _frontier_xy(region, r_hi)
        ax.fill_between(xs, ys, [a_hi] * len(xs), color="#cccccc", alpha=0.6, lw=0, label="region")
        ax.plot(xs, ys, color="black", marker="o", ms=3, label="frontier")
        for i, named in enumerate(overlays):
            color = OVERLAY_COLORS[i % len(OVERLAY_COLORS)]
            pts = named.corners
            if named.tag == "urd":
                outline = FlowRegion(tuple(FrontierVertex(*p) for p in pts), region.window)
                x, y = _frontier_xy(outline, r_hi)
            elif named.tag == "A":
                pts = pts + [pts[0]]
                x, y = [float(p[0]) for p in pts], [float(p[1]) for p in pts]
            else:
                x, y = [float(p[0]) for p in pts], [float(p[1]) for p in pts]
            ax.plot(x, y, ls="--", color=color, label=named.name)
        ax.set_xlim(r_lo, r_hi)
        ax.set_ylim(a_lo, a_hi)
        ax.set_xlabel("r")
        ax.set_ylabel(r"$\alpha$")
        if title:
            ax.set_title(title)
        ax.legend(loc="upper right", frameon=False)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path


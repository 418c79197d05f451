"""Deterministic SVG rendering of discrete polygon data.

The renderer draws the point cloud of ``(index, value)`` pairs together with
the lower-hull polyline.  Rendering is byte-stable across runs: the Agg
backend is forced, the SVG hash salt is pinned, and the date metadata is
stripped, so re-rendering identical data produces identical files.

Values of rank two are flattened to a single display coordinate
``major + minor/1000`` so that the lexicographic order of the pair is
reflected (for small minor parts) by the order of the plotted ordinate.
The axis label records the flattening so the plot stays honest.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple

from .ordgroup import GroupElement

_HASH_SALT = "limitkey-polygon"

#: Divisor used to fold the minor coordinate of a rank-two value into the
#: display ordinate.  Large enough that every catalog example keeps the
#: lexicographic order visually intact.
MINOR_SCALE = 1000


def flatten_value(value: GroupElement) -> float:
    """Collapse a group element to a display ordinate.

    Rank one maps to its single coordinate; rank two maps to
    ``major + minor / MINOR_SCALE``.
    """
    coords = value.coords
    if len(coords) == 1:
        return float(coords[0])
    if len(coords) == 2:
        return float(coords[0]) + float(coords[1]) / MINOR_SCALE
    raise ValueError(f"cannot flatten a rank-{len(coords)} value for display")


def axis_label(rank: int) -> str:
    if rank == 1:
        return "value"
    return f"value (major + minor/{MINOR_SCALE})"


def save_polygon_svg(
    path: str,
    rows: Sequence[Tuple[int, GroupElement, bool]],
    *,
    title: str = "",
    rank: int = 1,
) -> None:
    """Render ``(index, value, on_hull)`` rows to an SVG file.

    Hull rows are connected by a polyline and drawn filled; off-hull rows
    are drawn hollow.  The output is deterministic for fixed input.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with plt.rc_context({"svg.hashsalt": _HASH_SALT}):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        try:
            hull_pts = [(i, flatten_value(v)) for i, v, on in rows if on]
            off_pts = [(i, flatten_value(v)) for i, v, on in rows if not on]
            if hull_pts:
                xs, ys = zip(*hull_pts)
                ax.plot(xs, ys, "-", color="#1f6f8b", linewidth=1.5, zorder=1)
                ax.plot(
                    xs,
                    ys,
                    "o",
                    color="#1f6f8b",
                    markersize=6,
                    zorder=3,
                    label="hull",
                )
            if off_pts:
                xs, ys = zip(*off_pts)
                ax.plot(
                    xs,
                    ys,
                    "o",
                    markerfacecolor="white",
                    markeredgecolor="#c05640",
                    markersize=6,
                    zorder=2,
                    label="cloud",
                )
            ax.set_xlabel("expansion index")
            ax.set_ylabel(axis_label(rank))
            if title:
                ax.set_title(title)
            all_idx = [i for i, _v, _on in rows]
            if all_idx:
                ax.set_xticks(sorted(set(all_idx)))
            ax.grid(True, linestyle=":", linewidth=0.5, alpha=0.6)
            if hull_pts and off_pts:
                ax.legend(loc="best")
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)

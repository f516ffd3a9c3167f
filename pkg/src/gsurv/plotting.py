"""Figure rendering: step plots and parallel-axes linkage diagrams.

All output is SVG rendered through matplotlib with a pinned hash salt and
no timestamp metadata, so repeated runs on the same inputs are
byte-identical.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .aggops import Fca
from .setfun import MonotoneMeasure, format_subset, format_value
from .survival import StepFn, aggregation_table

__all__ = [
    "DiagramModel",
    "diagram_model",
    "render_step_svg",
    "render_parallel_svg",
]

_SVG_SALT = "gsurv"
_MAIN_STYLE = dict(color="#1f557f", linewidth=2.0)
_OVERLAY_STYLE = dict(color="#c04a4a", linewidth=1.6, linestyle="--")


@dataclass(frozen=True)
class DiagramModel:
    """Rows (set, aggregated value, complement measure), aggregation nonincreasing."""

    n: int
    rows: tuple[tuple[int, Fraction, Fraction], ...]


def diagram_model(
    x: Sequence[Fraction],
    measure: MonotoneMeasure,
    fca: Fca,
    tolerance: Fraction | None = None,
) -> DiagramModel:
    """One row per conditioning set; ties sort by ascending bitmask."""
    table = aggregation_table(fca, x, tolerance)
    rows = sorted(
        ((mask, value, measure.complement_value(mask)) for mask, value in table.items()),
        key=lambda row: (-row[1], row[0]),
    )
    return DiagramModel(fca.n, tuple(rows))


def _save_svg(fig) -> bytes:
    buffer = io.BytesIO()
    fig.savefig(buffer, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buffer.getvalue()


def _draw_step(ax, fn: StepFn, xmax: float, style: dict, label: str) -> None:
    first = True
    for start, end, value in fn.pieces():
        x0, y0 = float(start), float(value)
        x1 = float(end) if end is not None else xmax
        ax.plot([x0, x1], [y0, y0], label=label if first else None, **style)
        first = False
        ax.plot([x0], [y0], marker="o", markersize=4.5, color=style["color"])
        if end is not None:
            ax.plot(
                [x1],
                [y0],
                marker="o",
                markersize=4.5,
                markerfacecolor="white",
                color=style["color"],
            )


def render_step_svg(
    fn: StepFn,
    overlay: StepFn | None = None,
    labels: tuple[str, str] = ("generalized", "standard"),
) -> bytes:
    """Right-continuous step plot with closed/open endpoint markers."""
    tail = [fn.breakpoints[-1]] + ([overlay.breakpoints[-1]] if overlay else [])
    xmax = float(max(tail)) * 1.25 + 1.0
    with plt.rc_context({"svg.hashsalt": _SVG_SALT}):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        _draw_step(ax, fn, xmax, _MAIN_STYLE, labels[0])
        if overlay is not None:
            _draw_step(ax, overlay, xmax, _OVERLAY_STYLE, labels[1])
            ax.legend(loc="upper right")
        ax.set_xlim(-0.05 * xmax, xmax)
        tops = list(fn.values) + (list(overlay.values) if overlay else [])
        ymax = float(max(tops)) if tops else 1.0
        ax.set_ylim(-0.08 * max(ymax, 1.0), max(ymax, 1.0) * 1.15)
        ax.set_xlabel("level")
        ax.set_ylabel("measure")
        ax.grid(True, alpha=0.3)
        return _save_svg(fig)


def render_parallel_svg(model: DiagramModel) -> bytes:
    """Two parallel axes linked per conditioning set.

    The lower axis carries the aggregated values (nonincreasing left to
    right, labelled with their sets); the upper axis carries the
    complement measures in ascending order.
    """
    count = len(model.rows)
    upper_order = sorted(
        range(count), key=lambda i: (model.rows[i][2], model.rows[i][0])
    )
    upper_slot = {row_index: slot for slot, row_index in enumerate(upper_order)}
    with plt.rc_context({"svg.hashsalt": _SVG_SALT}):
        width = max(6.4, 1.1 * count)
        fig, ax = plt.subplots(figsize=(width, 4.2))
        ax.axhline(0.0, color="black", linewidth=1.2)
        ax.axhline(1.0, color="black", linewidth=1.2)
        for i, (mask, lower, upper) in enumerate(model.rows):
            xl, xu = float(i), float(upper_slot[i])
            ax.plot([xl, xu], [0.0, 1.0], color="#1f557f", linewidth=1.1, alpha=0.8)
            ax.plot([xl], [0.0], marker="o", markersize=4, color="black")
            ax.plot([xu], [1.0], marker="o", markersize=4, color="black")
            ax.annotate(
                format_value(lower),
                (xl, 0.0),
                xytext=(0, -16),
                textcoords="offset points",
                ha="center",
                fontsize=9,
            )
            ax.annotate(
                format_subset(mask),
                (xl, 0.0),
                xytext=(0, -30),
                textcoords="offset points",
                ha="center",
                fontsize=7,
                color="#555555",
            )
        for slot, row_index in enumerate(upper_order):
            ax.annotate(
                format_value(model.rows[row_index][2]),
                (float(slot), 1.0),
                xytext=(0, 10),
                textcoords="offset points",
                ha="center",
                fontsize=9,
            )
        ax.set_xlim(-0.8, count - 0.2 if count > 1 else 1.0)
        ax.set_ylim(-0.45, 1.4)
        ax.axis("off")
        return _save_svg(fig)

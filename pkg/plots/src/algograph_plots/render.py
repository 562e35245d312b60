"""Render mean/std panels with optional dashed prediction overlays.

The renderer never re-derives data: plotted series carry the CSV's
original cell strings, and the self-check dump re-emits exactly those
strings, so fidelity to the input can be checked byte for byte.
Output bytes are deterministic for fixed inputs (fixed SVG hash salt,
no timestamps in the image metadata).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .spec import FigureSpec, FigureSpecError, PanelSpec  # noqa: E402

ERROR_COLOR = "tab:blue"
COST_COLOR = "tab:red"


@dataclass
class PanelSeries:
    """One panel's plotted data, with the CSV cells kept verbatim."""

    panel: PanelSpec
    x: list[str]
    mean: list[str]
    std: list[str]
    prediction_x: list[str]
    prediction: list[str]


def _read_csv(path) -> tuple[list[str], list[dict[str, str]]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise FigureSpecError(f"cannot read CSV {path}: {err}") from err
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        raise FigureSpecError(f"{path} is empty")
    header, data = rows[0], rows[1:]
    if not data:
        raise FigureSpecError(f"{path} has a header but no data rows")
    return header, [dict(zip(header, row)) for row in data]


def _column(rows, header, name, path) -> list[str]:
    if name not in header:
        raise FigureSpecError(f"{path} has no column {name!r} (header: {', '.join(header)})")
    return [row[name] for row in rows]


def extract_series(spec: FigureSpec) -> list[PanelSeries]:
    """The plotted series for every panel, straight from the CSV cells."""
    header, rows = _read_csv(spec.summary_csv)
    xs = _column(rows, header, spec.x, spec.summary_csv)
    pred_header, pred_rows = (None, None)
    if spec.prediction_csv:
        pred_header, pred_rows = _read_csv(spec.prediction_csv)

    series = []
    for panel in spec.ordered_panels():
        mean = _column(rows, header, f"{panel.metric}_mean", spec.summary_csv)
        std = _column(rows, header, f"{panel.metric}_std", spec.summary_csv)
        prediction_x: list[str] = []
        prediction: list[str] = []
        if panel.prediction:
            if pred_rows is None:
                raise FigureSpecError(
                    f"panel {panel.name!r} wants prediction {panel.prediction!r}"
                    " but the spec names no prediction_csv"
                )
            prediction_x = _column(pred_rows, pred_header, spec.x, spec.prediction_csv)
            prediction = _column(pred_rows, pred_header, panel.prediction, spec.prediction_csv)
        series.append(PanelSeries(panel, xs, mean, std, prediction_x, prediction))
    return series


def render(spec: FigureSpec) -> list[PanelSeries]:
    """Write the figure to spec.out; returns the plotted series."""
    series = extract_series(spec)

    plt.rcParams["svg.hashsalt"] = "algograph-plots"
    fig, axes = plt.subplots(
        1, len(series), figsize=(3.2 * len(series), 2.8), squeeze=False
    )
    for ax, entry in zip(axes[0], series):
        color = ERROR_COLOR if entry.panel.style == "error" else COST_COLOR
        x = [float(v) for v in entry.x]
        mean = [float(v) for v in entry.mean]
        std = [float(v) for v in entry.std]
        ax.plot(x, mean, marker="o", markersize=3, color=color)
        if len(x) > 1:
            low = [m - s for m, s in zip(mean, std)]
            high = [m + s for m, s in zip(mean, std)]
            ax.fill_between(x, low, high, color=color, alpha=0.2, linewidth=0)
        if entry.prediction:
            px = [float(v) for v in entry.prediction_x]
            py = [float(v) for v in entry.prediction]
            ax.plot(px, py, linestyle="--", marker="x", markersize=3, color="black")
        ax.set_xlabel(spec.x)
        ax.set_title(entry.panel.label, fontsize=9)
        ax.tick_params(labelsize=8)
    fig.tight_layout()

    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    metadata = {"Date": None} if spec.image_format == "svg" else (
        {"CreationDate": None} if spec.image_format == "pdf" else None
    )
    fig.savefig(out, format=spec.image_format, metadata=metadata)
    plt.close(fig)
    return series


SELF_CHECK_HEADER = ["panel", "kind", "x", "value", "std"]


def self_check_csv(series: list[PanelSeries]) -> str:
    """Dump the plotted series; value cells are the input CSV's bytes."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SELF_CHECK_HEADER)
    for entry in series:
        for x, mean, std in zip(entry.x, entry.mean, entry.std):
            writer.writerow([entry.panel.name, "measured", x, mean, std])
        for x, value in zip(entry.prediction_x, entry.prediction):
            writer.writerow([entry.panel.name, "prediction", x, value, ""])
    return buffer.getvalue()

"""Figure-spec files: the same INI structured-text format as sweep configs.

A spec names the input summary CSV (and optionally a prediction CSV for
dashed overlays), the x column (n or m), the output image, and one
[panel.<id>] section per panel:

    [figure]
    summary_csv = counting_summary.csv
    prediction_csv = counting_predictions.csv
    x = m
    out = counting.svg
    format = svg

    [panel.err_abs]
    metric = err_abs
    label = absolute counting error
    style = error

    [panel.latency]
    metric = latency_p4
    label = latency (p=4)
    style = cost
    prediction = pred_latency
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path


class FigureSpecError(Exception):
    """A figure spec or its input CSVs are unusable."""


@dataclass(frozen=True)
class PanelSpec:
    name: str
    metric: str
    label: str
    style: str = "error"  # error -> blue, cost -> red
    prediction: str | None = None


@dataclass(frozen=True)
class FigureSpec:
    summary_csv: str
    out: str
    panels: tuple[PanelSpec, ...]
    x: str = "m"
    image_format: str = "svg"
    prediction_csv: str | None = None

    def ordered_panels(self) -> list[PanelSpec]:
        """Error-style panels first, cost-style after, stable within style."""
        return [p for p in self.panels if p.style == "error"] + [
            p for p in self.panels if p.style != "error"
        ]


FORMATS = ("svg", "pdf", "png")
STYLES = ("error", "cost")


def parse_figure_spec(text: str, base_dir: str | Path = ".") -> FigureSpec:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as err:
        raise FigureSpecError(f"figure spec does not parse: {err}") from err
    if not parser.has_section("figure"):
        raise FigureSpecError("missing [figure] section")

    base = Path(base_dir)

    def resolve(raw):
        path = Path(raw)
        return str(path if path.is_absolute() else base / path)

    summary = parser.get("figure", "summary_csv", fallback=None)
    if not summary:
        raise FigureSpecError("[figure] needs summary_csv")
    out = parser.get("figure", "out", fallback=None)
    if not out:
        raise FigureSpecError("[figure] needs out")
    x = parser.get("figure", "x", fallback="m")
    if x not in ("n", "m"):
        raise FigureSpecError(f"x must be n or m, got {x!r}")
    image_format = parser.get("figure", "format", fallback=Path(out).suffix.lstrip(".") or "svg")
    if image_format not in FORMATS:
        raise FigureSpecError(f"format must be one of {FORMATS}, got {image_format!r}")
    prediction = parser.get("figure", "prediction_csv", fallback=None)

    panels = []
    for section in parser.sections():
        if not section.startswith("panel."):
            continue
        name = section[len("panel."):]
        metric = parser.get(section, "metric", fallback=None)
        if not metric:
            raise FigureSpecError(f"[{section}] needs metric")
        style = parser.get(section, "style", fallback="error")
        if style not in STYLES:
            raise FigureSpecError(f"[{section}] style must be one of {STYLES}, got {style!r}")
        panels.append(
            PanelSpec(
                name=name,
                metric=metric,
                label=parser.get(section, "label", fallback=metric),
                style=style,
                prediction=parser.get(section, "prediction", fallback=None),
            )
        )
    if not panels:
        raise FigureSpecError("figure spec declares no panels")

    return FigureSpec(
        summary_csv=resolve(summary),
        out=resolve(out),
        panels=tuple(panels),
        x=x,
        image_format=image_format,
        prediction_csv=resolve(prediction) if prediction else None,
    )


def load_figure_spec(path) -> FigureSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise FigureSpecError(f"cannot read figure spec: {err}") from err
    return parse_figure_spec(text, base_dir=path.parent)

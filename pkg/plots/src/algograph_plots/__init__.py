"""Figure rendering for algograph sweep CSVs."""

from .render import PanelSeries, extract_series, render, self_check_csv
from .spec import FigureSpec, FigureSpecError, PanelSpec, load_figure_spec, parse_figure_spec

__version__ = "0.1.0"

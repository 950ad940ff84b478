"""Batch figure rendering for simulator artifacts.

Reads the CSV and JSON files the simulator's command-line tool persists
and turns them into publication-style figures.  No physics is
recomputed here: every curve is a plot of persisted numbers, except the
normal-surface kind, whose subject *is* the dispersion geometry and
which draws level sets from the two speeds recorded in a run's
configuration.
"""

from .figures import KINDS, FigureJob, SchemaError, StyleOptions, build_figure, render

__version__ = "0.1.0"

__all__ = [
    "FigureJob",
    "StyleOptions",
    "SchemaError",
    "KINDS",
    "build_figure",
    "render",
    "__version__",
]

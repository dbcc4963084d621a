"""Offline regeneration of publication-style figures from the ladder CLI's
CSV/JSON artifacts. The coupling to the data producer is files only."""

from .errors import FigvizError, SchemaError, UnknownRecipeError
from .render import build_figure, render
from .specs import STYLES, FigureSpec, catalog, file_roles, spec_for

__all__ = [
    "FigvizError",
    "SchemaError",
    "UnknownRecipeError",
    "FigureSpec",
    "STYLES",
    "catalog",
    "file_roles",
    "spec_for",
    "build_figure",
    "render",
]

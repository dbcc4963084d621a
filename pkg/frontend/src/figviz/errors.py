class FigvizError(Exception):
    """Base class for figure-regeneration failures."""


class SchemaError(FigvizError):
    """An input file is missing, unreadable, or lacks a declared column."""


class UnknownRecipeError(FigvizError):
    """The requested recipe has no catalog entry."""

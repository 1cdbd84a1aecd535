"""Figure rendering for shepard-cv experiment outputs.

Consumes only the CSV files named by a manifest; never recomputes any
quantity.
"""

from .render import FigureSpec, SchemaError, main, render

__all__ = ["FigureSpec", "SchemaError", "main", "render"]

__version__ = "0.1.0"

"""Filtered McCord models, coends over finite categories, and E1 series."""

__version__ = "0.1.0"

"""Curves, meridians and mapping classes on handlebody boundaries."""

__version__ = "0.1.0"

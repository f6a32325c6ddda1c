"""Monetary dynamics on production networks."""

__version__ = "0.1.0"

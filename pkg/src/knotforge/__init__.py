"""Realize Alexander/Conway polynomials by arborescent link diagrams."""

__version__ = "0.1.0"

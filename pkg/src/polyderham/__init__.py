"""Exact piecewise polynomial de Rham complexes on rational polyhedra."""

__version__ = "0.1.0"

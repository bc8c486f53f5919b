"""Exact enumeration of square-lattice self-avoiding walks and series analysis."""

__version__ = "0.1.0"

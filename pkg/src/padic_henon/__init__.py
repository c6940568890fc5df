"""Exact p-adic arithmetic and dynamics of Henon maps over Q_p."""

__version__ = "0.1.0"

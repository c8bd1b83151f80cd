"""Exact computer algebra for polynomial and free-algebra automorphisms."""

__version__ = "0.1.0"

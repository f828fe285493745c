"""Exact and numerical tools for volume asymptotics of height balls:
Igusa zeta functions, Clemens complexes, Tauberian extraction and examples."""

__version__ = "0.1.0"

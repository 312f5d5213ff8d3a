"""Exact enumeration of higher-dimensional partitions, their refinements, and
the rational / Borel-resummed generating functions that tie them together."""

__version__ = "0.1.0"

"""Exact and heuristic tools for hypergraph Turan problems with bounded matching number."""

__version__ = "0.1.0"

"""Exact verification workbench for word-metric spectral triples on group C*-algebras
and the quantum isometry groups acting on them."""

__version__ = "0.1.0"

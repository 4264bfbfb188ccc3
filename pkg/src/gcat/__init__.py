"""Exact finite-category toolkit: categories with group/monoid actions,
Dwyer maps and their explicit pushouts, nerve/subdivision/Ex functors,
Smith-normal-form homology, and desk-scale weak-equivalence certificates."""

__version__ = "0.1.0"

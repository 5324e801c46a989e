"""Homology of unitriangular groups and Lie algebras, OI/OVI combinatorics,
and the well-partial-order tools used to study their stability."""

__version__ = "0.1.0"

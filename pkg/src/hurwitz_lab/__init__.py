"""Hurwitz spaces of branched covers: component rings, stabilization, rack and Koszul
homology, and class groups of hyperelliptic function fields."""

__version__ = "0.1.0"

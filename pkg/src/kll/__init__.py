"""Exact-arithmetic checks for quaternion-algebra ramification, homology
growth of covers, trivalent-graph bounds, Cheeger constants, and
subgroup counting."""

__version__ = "0.1.0"

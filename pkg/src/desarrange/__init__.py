"""Exact enumeration of desarrangements: permutation statistics, truncated
power series, the generalized run theorem, and pattern avoidance, all
cross-checked against brute force."""

__version__ = "0.1.0"

"""Exact replay of the boundary-divisor screen for Fano 3-folds with B2 = 2."""

__version__ = "0.1.0"

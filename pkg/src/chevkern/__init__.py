"""Exact-arithmetic toolkit for Chevalley groups over commutative rings."""

__version__ = "0.1.0"

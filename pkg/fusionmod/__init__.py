"""Combinatorics of module categories over the affine fusion categories C(sl_N, k)."""

__version__ = "0.1.0"

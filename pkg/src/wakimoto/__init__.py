"""Principally graded Wakimoto modules of affine sl2 in exact arithmetic."""

__version__ = "0.1.0"

"""Transversal T^{1/N} gates in the D(D_4N) quantum double, checked exactly."""

__version__ = "0.1.0"

"""Mahler measures of elliptic modular surfaces against weight-3 L-values."""

__version__ = "0.1.0"

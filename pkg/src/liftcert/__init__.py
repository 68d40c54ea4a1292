"""Exact certificates for lifting systems over truncated local rings."""

__version__ = "0.1.0"

"""Eisenstein congruences at prime level, with exact verification tools."""

__version__ = "0.1.0"

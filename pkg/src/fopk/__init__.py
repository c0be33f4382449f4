"""Executable finite combinatorics around the functional order property."""

__version__ = "0.1.0"

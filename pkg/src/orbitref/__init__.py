"""Orbit reflexivity of real matrices."""

__version__ = "0.1.0"

"""Exact construction and verification of multiloop Lie tori."""

__version__ = "0.1.0"

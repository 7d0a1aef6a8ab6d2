"""Weak visibility polygons of segments inside polygons, exactly."""

__version__ = "0.1.0"

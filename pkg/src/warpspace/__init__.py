"""Metric-geometry engine for warped products, mapping cylinders and graph-of-spaces quotients."""

__version__ = "0.1.0"

"""Linearization of third-order semi-linear ODEs via flat geodesic projections."""

__version__ = "0.1.0"

"""Certified crossing-free piecewise-linear 3D morphs between planar
straight-line drawings of the same planar graph."""

__version__ = "0.1.0"

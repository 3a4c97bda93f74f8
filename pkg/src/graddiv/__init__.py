"""Spectral toolkit for the gradient-of-divergence operator on a ball."""
__version__ = "0.1.0"

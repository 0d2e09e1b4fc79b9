"""Elliptic pseudoprimes and elliptic Carmichael numbers."""

__version__ = "0.1.0"

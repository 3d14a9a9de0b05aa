"""Hochschild, cyclic and periodic cyclic homology of quantum Kummer spaces."""

__version__ = "0.1.0"

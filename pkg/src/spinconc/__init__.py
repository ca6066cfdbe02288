"""Pairwise entanglement in collective spin models."""
__version__ = "0.1.0"

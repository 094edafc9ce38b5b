"""Minimal surfaces from Weierstrass data and their Chern-Ricci functions."""

__version__ = "0.1.0"

"""Isospectral deformations of the shifted harmonic oscillator."""

__version__ = "0.1.0"

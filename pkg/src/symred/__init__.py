"""Lie-Baecklund symmetry verification and ansatz reduction of nonlinear diffusion equations."""

__version__ = "0.1.0"

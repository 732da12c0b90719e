"""Exact computations in the quantum Frobenius Heisenberg category."""

__version__ = "0.1.0"

"""Toric degenerations, string polytopes and gradient-Hamiltonian flows."""

__version__ = "0.1.0"

"""Quasi-plane-wave solutions of the spin-1 particle in Pauli approximation on Lobachevsky space."""

__version__ = "0.1.0"

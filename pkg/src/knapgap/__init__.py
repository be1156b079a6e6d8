"""Exact distances, Frobenius numbers and integrality gaps for knapsack polyhedra."""

__version__ = "0.1.0"

"""Finite-state Optimality Theory: generation, constraint ranking, and hardness constructions."""

__version__ = "0.1.0"

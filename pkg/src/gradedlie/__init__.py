"""Exact computations with finitely presented graded Lie algebras."""

__version__ = "0.1.0"

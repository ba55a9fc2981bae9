"""Monadic equational systems over finite sets."""

__version__ = "0.1.0"

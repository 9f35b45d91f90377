"""Exact toolkit for competitive equilibria from equal incomes with indivisible goods."""

__version__ = "0.1.0"

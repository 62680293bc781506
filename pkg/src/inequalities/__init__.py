"""Inequality checkers and stability certificates."""

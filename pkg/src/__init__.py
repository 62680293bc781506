"""Numerical toolkit for stability of convex-geometry inequalities."""

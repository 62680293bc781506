"""Convex bodies in vertex representation and standard test families."""

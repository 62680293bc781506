"""Spherical integration, cap profiles and derived stability constants."""

"""Volumes, mixed volumes, intrinsic volumes and radii of polytopes."""

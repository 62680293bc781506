"""Configuration files and run settings."""

"""Independent reference computations."""

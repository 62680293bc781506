"""Surface area measures of polytopes."""

"""Console entry points for softpath."""

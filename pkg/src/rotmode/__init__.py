"""Two harmonic modes coupled through angular momentum."""

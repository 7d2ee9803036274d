"""Relative equilibria: boosted n-gons, the collinear five-body family and their certificates."""

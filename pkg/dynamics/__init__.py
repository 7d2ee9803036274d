"""Curved n-body dynamics on the hyperbolic plane."""

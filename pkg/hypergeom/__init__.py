"""Hyperbolic plane models: the hyperboloid, the upper half plane and their isometries."""

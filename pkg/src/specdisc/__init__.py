"""Spectral decompositions of discrepancy kernels and point-set optimization
on the interval, ball, sphere, rotation group and the Grassmannian G(2,4)."""

__version__ = "0.1.0"

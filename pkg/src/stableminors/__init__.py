"""Exact computation of minimal free resolutions over graded quotient rings,
ideals of minors of their differentials, and the periodicity/stabilization
analytics built on top of them."""

__version__ = "0.1.0"

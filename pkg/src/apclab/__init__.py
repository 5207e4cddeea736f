"""Exact and numerical checks for almost positive curvature on cohomogeneity-two
generalized Eschenburg spaces."""

__version__ = "0.1.0"

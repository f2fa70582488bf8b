"""Exact desk-scale computations for divisor configurations on products of projective spaces.

Section spaces, weighted filtrations and their nu invariant, intersection
numbers and nef cones, lower bounds for nu, and certificates assembling
these into quasi-hyperbolicity criteria. All arithmetic is exact.
"""

__version__ = "0.1.0"

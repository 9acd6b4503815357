"""Exact computations for iterated quadratic rational maps over the rationals.

The package covers iterate recursions, discriminants, mod-p orbit sieves,
certificates of irreducibility and maximality, binary-tree automorphism
groups, and Frobenius sampling over prime fields.
"""

__version__ = "0.1.0"

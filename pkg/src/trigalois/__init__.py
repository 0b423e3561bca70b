"""Verification lab for the arithmetic of characteristic polynomials of random
tridiagonal integer matrices: exact polynomial engines, mod-p root statistics,
PSL2(p) generation and mixing checks, wreath-product orbit counts and GF(2)
cohomology dimensions.
"""

__version__ = "0.1.0"

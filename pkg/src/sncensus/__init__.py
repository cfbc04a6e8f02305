"""Exact census, sieve statistics and Galois-group certification for monic
polynomials over the integer ring of a fixed number field."""

__version__ = "0.1.0"

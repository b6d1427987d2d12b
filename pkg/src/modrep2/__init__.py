"""Irreducible characters of automorphism groups of rank-two modules over
truncated discrete valuation rings."""

__version__ = "0.1.0"

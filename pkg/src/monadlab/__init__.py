"""Cohomology, Buchsbaum index and regularity of rank-2 bundles on P^3 given by monads."""
__version__ = "0.1.0"

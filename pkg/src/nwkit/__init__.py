"""Exact and certified computations around Eisenstein series, auxiliary
polynomials, multiplicity estimates and periods."""

__version__ = "0.1.0"

"""Numerical certification of entropic uncertainty relations for spin and
mutually-unbiased observables in dimensions 2 to 5."""

__version__ = "0.1.0"

"""Exact Bayesian analysis and verification of generalized Monty Hall games."""

__version__ = "0.1.0"

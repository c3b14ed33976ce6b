"""Exact separator-driven solvers for Max 2-CSP and dominating-set counting."""

__version__ = "0.1.0"

"""Finite verification of social choice impossibility results by search and SAT."""

__version__ = "0.1.0"

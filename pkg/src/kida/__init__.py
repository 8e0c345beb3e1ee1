"""Elliptic curves with large anticyclotomic lambda-invariant: prime search,
parameter search and lambda-invariant bookkeeping."""

__version__ = "0.1.0"

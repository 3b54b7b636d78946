"""Exact-arithmetic Bockstein spectral sequences of differential graded Lie
algebras and their universal enveloping algebras, over the p-local integers."""

__version__ = "0.1.0"

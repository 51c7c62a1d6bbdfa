"""Exact-arithmetic workbench for n-ary partially associative algebras."""

__version__ = "0.1.0"

"""Semantic linters and documentation generator for exported proof-library
corpora."""

__version__ = "0.1.0"

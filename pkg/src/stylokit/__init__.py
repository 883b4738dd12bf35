"""Stylometric authorship attribution for token-annotated verse corpora."""

__version__ = "0.1.0"

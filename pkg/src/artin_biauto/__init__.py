"""Biautomatic structures for Artin groups of almost large type."""

__version__ = "0.1.0"

"""Exact trace identities of weighted-trace diagonal matrix algebras."""

__version__ = "0.1.0"
